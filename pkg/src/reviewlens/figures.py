"""Figure rendering for bench reports.

Each report emitter has a figure twin: the delimited output gets a PNG
next to it so a report directory is readable at a glance. Rendering uses
the Agg backend and never opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchReport

__all__ = ["render_llm_bench_figure", "render_retrieval_figure"]


def render_llm_bench_figure(report: BenchReport, path: Path | str) -> Path:
    """Grouped bars: mean completion latency per model, one group per role."""
    path = Path(path)
    roles = []
    for row in report.rows:
        if row.role not in roles:
            roles.append(row.role)
    models = []
    for row in report.rows:
        if row.model_id not in models:
            models.append(row.model_id)

    width = 0.8 / max(1, len(roles))
    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(models)), 4.0))
    for role_index, role in enumerate(roles):
        values = []
        for model in models:
            row = next((r for r in report.rows if r.model_id == model and r.role == role), None)
            values.append(row.mean_latency_s if row and row.mean_latency_s is not None else 0.0)
        offsets = [i + role_index * width for i in range(len(models))]
        ax.bar(offsets, values, width=width, label=role)
    ax.set_xticks([i + width * (len(roles) - 1) / 2 for i in range(len(models))])
    ax.set_xticklabels(models, rotation=20, ha="right")
    ax.set_ylabel("mean latency (s)")
    ax.set_title(f"Completion latency by model ({report.clock_type} clock, {report.trials} trials)")
    ax.legend()
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_retrieval_figure(rows: list[dict], path: Path | str) -> Path:
    """Bar chart of fetch wall time per provider, cost noted on each bar."""
    path = Path(path)
    ok_rows = [row for row in rows if row.get("wall_time_s") is not None]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    providers = [row["provider"] for row in ok_rows]
    times = [row["wall_time_s"] for row in ok_rows]
    bars = ax.bar(providers, times)
    for bar, row in zip(bars, ok_rows):
        ax.annotate(
            f"${row['cost_per_1000']}/1k",
            xy=(bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    ax.set_ylabel("fetch wall time (s)")
    ax.set_title("Review retrieval time per provider")
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
