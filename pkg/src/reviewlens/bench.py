"""Benchmark harness: timed summary/query runs per model and timed/costed
fetch runs per provider, emitted as comparison reports.

Offline is the default and is bit-reproducible: completions go through the
mock adapter with a seeded per-model latency profile on a simulated clock,
so the report pipeline is exercised without any network and the numbers
are identical run to run. Live benching is opt-in and inherits whatever
the real providers do.

Latency is measured around the gateway completion call only (the fetch and
packing stages are benchmarked separately by the retrieval bench).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Sequence

from .clocks import Clock, SYSTEM_CLOCK, SimulatedClock
from .errors import EmptyInput, EmptyReport, ReviewLensError
from .gateway import LlmGateway
from .insight import InsightEngine, QueryRequest, SummaryRequest
from .llm_adapters import MockAdapter
from .models import ReviewCorpus
from .providers import (
    DEFAULT_PROVIDER_CONFIGS,
    FetchRequest,
    ReviewFetcher,
    ReviewProvider,
)
from .registry import format_usd, seed_registry

__all__ = [
    "BenchPlan",
    "BenchRow",
    "BenchReport",
    "OFFLINE_LLM_DELAYS_S",
    "OFFLINE_FETCH_DELAYS_S",
    "DEFAULT_BENCH_MODELS",
    "run_llm_bench",
    "run_retrieval_bench",
    "emit_report",
    "emit_retrieval_report",
    "build_offline_bench_engine",
    "DelayingProvider",
]

# Seeded latency profile for offline benchmarking, seconds per completion.
OFFLINE_LLM_DELAYS_S: dict[str, float] = {
    "gemini-1.5-flash": 3.0,
    "gpt-4o-mini": 5.0,
    "gpt-4o": 7.5,
    "o1-mini": 8.5,
    "claude-3.5-sonnet": 10.0,
    "gpt-4": 10.0,
}

# Seconds per 200-review fetch, scaled before use (see run_retrieval_bench).
OFFLINE_FETCH_DELAYS_S: dict[str, float] = {
    "arel": 25.0,
    "caprolok": 35.0,
    "snapshot": 5.0,
}

DEFAULT_BENCH_MODELS = (
    "gpt-4",
    "gpt-4o",
    "gpt-4o-mini",
    "o1-mini",
    "claude-3.5-sonnet",
    "gemini-1.5-flash",
)

BENCH_QUESTION = "is parking easy to find near the apartment"


@dataclass(frozen=True)
class BenchPlan:
    model_ids: tuple[str, ...] = DEFAULT_BENCH_MODELS
    trials: int = 3
    roles: tuple[str, ...] = ("summary", "query")
    question: str = BENCH_QUESTION
    language: str = "en"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for role in self.roles:
            if role not in ("summary", "query"):
                raise ValueError(f"unknown bench role {role!r}")


@dataclass(frozen=True)
class BenchRow:
    model_id: str
    role: str
    trials: int
    mean_latency_s: float | None
    min_latency_s: float | None
    max_latency_s: float | None
    input_tokens: int | None
    output_tokens: int | None
    cost_per_call: Decimal | None
    total_cost: Decimal
    error: str | None = None


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    clock_type: str  # "real" | "simulated"
    trials: int


def build_offline_bench_engine(
    delays: dict[str, float] | None = None,
    clock: Clock | None = None,
) -> InsightEngine:
    """Engine wired for reproducible offline benching: seeded mock delays,
    simulated clock, summary cache off (every trial must hit the gateway)."""
    clock = clock or SimulatedClock()
    registry = seed_registry()
    adapters = {"mock": MockAdapter(clock=clock, delays=delays or OFFLINE_LLM_DELAYS_S)}
    gateway = LlmGateway(registry, adapters=adapters, clock=clock)
    return InsightEngine(gateway, clock=clock, cache_enabled=False)


def _bench_cell(
    engine: InsightEngine, corpus: ReviewCorpus, plan: BenchPlan, model_id: str, role: str
) -> BenchRow:
    latencies: list[float] = []
    costs: list[Decimal] = []
    tokens_in: list[int] = []
    tokens_out: list[int] = []
    listing_id = corpus.listing.listing_id
    for _ in range(plan.trials):
        try:
            if role == "summary":
                result = engine.summarize(
                    corpus, SummaryRequest(listing_id=listing_id, language=plan.language, model_id=model_id)
                )
            else:
                result = engine.answer_query(
                    corpus,
                    QueryRequest(
                        listing_id=listing_id,
                        question=plan.question,
                        language=plan.language,
                        model_id=model_id,
                    ),
                )
        except ReviewLensError as exc:
            # A failing cell is recorded in-row; the run carries on.
            return BenchRow(
                model_id=model_id,
                role=role,
                trials=plan.trials,
                mean_latency_s=None,
                min_latency_s=None,
                max_latency_s=None,
                input_tokens=None,
                output_tokens=None,
                cost_per_call=None,
                total_cost=sum(costs, Decimal(0)),
                error=exc.code,
            )
        latencies.append(result.latency_s)
        costs.append(result.cost)
        tokens_in.append(result.input_tokens)
        tokens_out.append(result.output_tokens)
    total = sum(costs, Decimal(0))
    return BenchRow(
        model_id=model_id,
        role=role,
        trials=plan.trials,
        mean_latency_s=sum(latencies) / len(latencies),
        min_latency_s=min(latencies),
        max_latency_s=max(latencies),
        input_tokens=round(sum(tokens_in) / len(tokens_in)),
        output_tokens=round(sum(tokens_out) / len(tokens_out)),
        cost_per_call=total / plan.trials,
        total_cost=total,
    )


def run_llm_bench(
    plan: BenchPlan,
    engine: InsightEngine,
    corpus: ReviewCorpus,
    clock_type: str = "simulated",
) -> BenchReport:
    """Time `trials` calls per (model, role) cell through the insight engine.

    Rows come back in the comparison-table order: models ascending by mean
    summary latency (ties by model_id), failed models last, and within a
    model the summary row before the query row.
    """
    if not plan.model_ids:
        raise EmptyInput("bench plan names no models")
    cells: dict[tuple[str, str], BenchRow] = {}
    for model_id in plan.model_ids:
        for role in plan.roles:
            engine.clear_cache()
            cells[(model_id, role)] = _bench_cell(engine, corpus, plan, model_id, role)

    def model_key(model_id: str):
        summary_row = cells.get((model_id, "summary")) or cells.get((model_id, plan.roles[0]))
        latency = summary_row.mean_latency_s if summary_row and summary_row.mean_latency_s is not None else math.inf
        return (latency, model_id)

    ordered_models = sorted(plan.model_ids, key=model_key)
    rows = tuple(cells[(m, role)] for m in ordered_models for role in plan.roles)
    return BenchReport(rows=rows, clock_type=clock_type, trials=plan.trials)


class DelayingProvider:
    """Wraps a provider with an injected delay, simulating slow transports."""

    def __init__(self, inner: ReviewProvider, delay_s: float, clock: Clock = SYSTEM_CLOCK):
        self.inner = inner
        self.delay_s = delay_s
        self.clock = clock
        self.provider_id = inner.provider_id

    def fetch_raw(self, request: FetchRequest):
        self.clock.sleep(self.delay_s)
        return self.inner.fetch_raw(request)


def run_retrieval_bench(
    provider_ids: Sequence[str],
    request: FetchRequest,
    fetcher: ReviewFetcher,
) -> list[dict]:
    """One timed fetch per provider; failures land in their row instead of
    aborting the run. Fastest provider first, failed rows last."""
    if not provider_ids:
        raise EmptyInput("no providers to bench")
    rows: list[dict] = []
    for provider_id in provider_ids:
        config = fetcher.configs.get(provider_id) or DEFAULT_PROVIDER_CONFIGS.get(provider_id)
        row = {
            "provider": provider_id,
            "wall_time_s": None,
            "reviews": None,
            "cost_per_1000": str(config.cost_per_1000_reviews) if config else "unknown",
            "maintenance": config.maintenance if config else "unknown",
            "error": None,
        }
        try:
            _, metrics = fetcher.fetch_reviews(request, provider_id)
        except ReviewLensError as exc:
            row["error"] = exc.code
        else:
            row["wall_time_s"] = metrics.wall_time
            row["reviews"] = metrics.reviews_returned
        rows.append(row)
    rows.sort(key=lambda r: (r["wall_time_s"] is None, r["wall_time_s"] or 0.0, r["provider"]))
    return rows


def _fmt_latency(value: float | None) -> str:
    return "-" if value is None else f"{value:.3f}"


def _fmt_tokens(value: int | None) -> str:
    return "-" if value is None else str(value)


def _llm_report_lines(report: BenchReport) -> tuple[list[str], list[list[str]]]:
    header = [
        "model",
        "role",
        "mean_latency_s",
        "min_s",
        "max_s",
        "tokens_in",
        "tokens_out",
        "cost_per_call_usd",
        "status",
    ]
    body = []
    for row in report.rows:
        body.append(
            [
                row.model_id,
                row.role,
                _fmt_latency(row.mean_latency_s),
                _fmt_latency(row.min_latency_s),
                _fmt_latency(row.max_latency_s),
                _fmt_tokens(row.input_tokens),
                _fmt_tokens(row.output_tokens),
                format_usd(row.cost_per_call) if row.cost_per_call is not None else "-",
                row.error or "ok",
            ]
        )
    return header, body


def _markdown_table(header: list[str], body: list[list[str]], footer: str) -> bytes:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines.extend("| " + " | ".join(row) + " |" for row in body)
    lines.append("")
    lines.append(footer)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _csv_table(header: list[str], body: list[list[str]]) -> bytes:
    import csv
    import io

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(body)
    return buffer.getvalue().encode("utf-8")


def emit_report(report: BenchReport, format: str = "markdown_table") -> bytes:
    """Deterministic rendering of an LLM bench report."""
    if not report.rows:
        raise EmptyReport("bench report has no rows")
    header, body = _llm_report_lines(report)
    if format == "markdown_table":
        footer = f"clock: {report.clock_type}; trials per cell: {report.trials}"
        return _markdown_table(header, body, footer)
    if format == "csv":
        return _csv_table(header, body)
    raise ValueError(f"unknown report format {format!r}")


def emit_retrieval_report(rows: list[dict], format: str = "markdown_table") -> bytes:
    if not rows:
        raise EmptyReport("retrieval report has no rows")
    header = ["provider", "wall_time_s", "reviews", "cost_per_1000_usd", "maintenance", "status"]
    body = [
        [
            row["provider"],
            _fmt_latency(row["wall_time_s"]),
            _fmt_tokens(row["reviews"]),
            row["cost_per_1000"],
            row["maintenance"],
            row["error"] or "ok",
        ]
        for row in rows
    ]
    if format == "markdown_table":
        return _markdown_table(header, body, "one fetch per provider")
    if format == "csv":
        return _csv_table(header, body)
    raise ValueError(f"unknown report format {format!r}")
