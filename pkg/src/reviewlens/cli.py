"""Command-line front door.

Thin wrappers over the same core operations the HTTP service uses. Errors
print one machine-readable JSON object on stderr and exit nonzero.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .bench import (
    BenchPlan,
    DelayingProvider,
    OFFLINE_FETCH_DELAYS_S,
    build_offline_bench_engine,
    emit_report,
    emit_retrieval_report,
    run_llm_bench,
    run_retrieval_bench,
)
from .clocks import SimulatedClock, SYSTEM_CLOCK
from .config import load_config
from .errors import ReviewLensError
from .figures import render_llm_bench_figure, render_retrieval_figure
from .insight import QueryRequest, SummaryRequest
from .models import validate_listing_url
from .providers import (
    ArelFixtureProvider,
    CaprolokFixtureProvider,
    FetchRequest,
    ReviewFetcher,
    SnapshotScraperProvider,
)
from .registry import format_usd
from .service import build_state, create_app

FIXTURE_BENCH_LISTINGS = {
    "snapshot": "https://www.booking.com/hotel/gr/athens-harbor-view.html",
    "arel": "https://www.booking.com/hotel/it/roma-central-suites.html",
    "caprolok": "https://www.booking.com/hotel/it/roma-central-suites.html",
}

RETRIEVAL_DELAY_SCALE = 0.01


def fail_on_domain_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ReviewLensError as exc:
            click.echo(json.dumps({"error": exc.code, "message": str(exc)}), err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option("--config", "config_file", type=click.Path(path_type=Path), default=None, help="Config file (JSON).")
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None)
@click.pass_context
def main(ctx, config_file, cache_dir):
    """Review-insight engine: fetch listing reviews, summarize them, and ask questions."""
    ctx.ensure_object(dict)
    ctx.obj["config_file"] = config_file
    ctx.obj["overrides"] = {"cache_dir": cache_dir}


def _state(ctx, **extra_overrides):
    overrides = {**ctx.obj["overrides"], **extra_overrides}
    config = load_config(ctx.obj["config_file"], overrides=overrides)
    return build_state(config)


def _corpus_for(state, url: str, provider: str | None, max_reviews: int = 200, sort: str = "newest_first"):
    listing = validate_listing_url(url)
    cached = state.cache.get(listing.listing_id)
    if cached is not None:
        return cached, None
    request = FetchRequest(listing, max_reviews=max_reviews, sort=sort)
    corpus, metrics = state.fetcher.fetch_reviews(request, provider or state.config.default_provider)
    return corpus, metrics


@main.command()
@click.argument("url")
@click.option("--provider", default=None, help="Review source (default from config).")
@click.option("--max-reviews", default=200, show_default=True)
@click.option("--sort", default="newest_first", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@fail_on_domain_errors
def fetch(ctx, url, provider, max_reviews, sort, as_json):
    """Fetch reviews for a listing URL into the corpus cache."""
    state = _state(ctx)
    listing = validate_listing_url(url)
    request = FetchRequest(listing, max_reviews=max_reviews, sort=sort)
    corpus, metrics = state.fetcher.fetch_reviews(request, provider or state.config.default_provider)
    payload = {
        "listing_id": listing.listing_id,
        "reviews": len(corpus),
        "provider": metrics.provider,
        "wall_time_s": metrics.wall_time,
        "cost_usd": format_usd(metrics.monetary_cost),
        "pages_fetched": metrics.pages_fetched,
        "cache_path": str(state.cache.path_for(listing.listing_id)),
    }
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"fetched {payload['reviews']} reviews via {payload['provider']} -> {payload['cache_path']}")


@main.command()
@click.argument("url")
@click.option("--lang", default=None, help="Output language (ISO code).")
@click.option("--model", default=None, help="Model id (see `models`).")
@click.option("--provider", default=None)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@fail_on_domain_errors
def summarize(ctx, url, lang, model, provider, as_json):
    """Summarize a listing's reviews."""
    state = _state(ctx)
    corpus, _ = _corpus_for(state, url, provider)
    request = SummaryRequest(
        listing_id=corpus.listing.listing_id,
        language=lang or state.config.default_language,
        model_id=model or state.config.default_model_id,
    )
    result = state.engine.summarize(corpus, request)
    click.echo(json.dumps(result.as_dict(), indent=2) if as_json else result.text)


@main.command()
@click.argument("url")
@click.argument("question")
@click.option("--lang", default=None)
@click.option("--model", default=None)
@click.option("--provider", default=None)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@fail_on_domain_errors
def ask(ctx, url, question, lang, model, provider, as_json):
    """Ask a question about a listing, answered from its reviews."""
    state = _state(ctx)
    corpus, _ = _corpus_for(state, url, provider)
    request = QueryRequest(
        listing_id=corpus.listing.listing_id,
        question=question,
        language=lang or state.config.default_language,
        model_id=model or state.config.default_model_id,
    )
    result = state.engine.answer_query(corpus, request)
    if as_json:
        click.echo(json.dumps(result.as_dict(), indent=2))
    else:
        click.echo(result.text)
        if result.insufficient_evidence:
            click.echo("(flagged: the reviews contain no evidence for this question)", err=True)


@main.command()
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@fail_on_domain_errors
def models(ctx, as_json):
    """List the model registry with pricing and context windows."""
    state = _state(ctx)
    rows = [p.as_dict() for p in state.engine.gateway.registry.list_models()]
    if as_json:
        click.echo(json.dumps({"models": rows}, indent=2))
        return
    for row in rows:
        flag = "" if row["available"] else "  [unavailable]"
        click.echo(
            f"{row['model_id']:<18} in ${row['input_cost_per_1m']}/1M out ${row['output_cost_per_1m']}/1M"
            f"  window {row['prompt_window']}/{row['completion_window']}{flag}"
        )


@main.command()
@click.option("--live", is_flag=True, help="Bench real providers on the wall clock (needs API keys).")
@click.option("--trials", default=3, show_default=True)
@click.option("--results-dir", type=click.Path(path_type=Path), default=None)
@click.pass_context
@fail_on_domain_errors
def bench(ctx, live, trials, results_dir):
    """Run the latency/cost benchmarks and write report files."""
    state = _state(ctx)
    out_dir = Path(results_dir or state.config.results_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if live:
        engine = state.engine
        clock = SYSTEM_CLOCK
        clock_type = "real"
    else:
        clock = SimulatedClock()
        engine = build_offline_bench_engine(clock=clock)
        clock_type = "simulated"
    stamp = clock.utcnow().strftime("%Y%m%dT%H%M%SZ")

    fixture_url = "https://www.booking.com/hotel/gr/seaside-apartments.html"
    corpus, _ = _corpus_for(state, fixture_url, "fixture")
    report = run_llm_bench(BenchPlan(trials=trials), engine, corpus, clock_type=clock_type)
    written = []
    for fmt, suffix in (("markdown_table", "md"), ("csv", "csv")):
        path = out_dir / f"bench-llm-{stamp}.{suffix}"
        path.write_bytes(emit_report(report, fmt))
        written.append(path)
    written.append(render_llm_bench_figure(report, out_dir / f"bench-llm-{stamp}.png"))

    rows = []
    scale = 1.0 if live else RETRIEVAL_DELAY_SCALE
    bench_fetcher = ReviewFetcher(
        providers={
            "snapshot": DelayingProvider(
                SnapshotScraperProvider(state.config.fixture_root),
                OFFLINE_FETCH_DELAYS_S["snapshot"] * scale,
            ),
            "arel": DelayingProvider(
                ArelFixtureProvider(state.config.fixture_root), OFFLINE_FETCH_DELAYS_S["arel"] * scale
            ),
            "caprolok": DelayingProvider(
                CaprolokFixtureProvider(state.config.fixture_root),
                OFFLINE_FETCH_DELAYS_S["caprolok"] * scale,
            ),
        },
    )
    for provider_id, url in FIXTURE_BENCH_LISTINGS.items():
        request = FetchRequest(validate_listing_url(url), max_reviews=200)
        rows.extend(run_retrieval_bench([provider_id], request, bench_fetcher))
    rows.sort(key=lambda r: (r["wall_time_s"] is None, r["wall_time_s"] or 0.0))
    for fmt, suffix in (("markdown_table", "md"), ("csv", "csv")):
        path = out_dir / f"bench-retrieval-{stamp}.{suffix}"
        path.write_bytes(emit_retrieval_report(rows, fmt))
        written.append(path)
    written.append(render_retrieval_figure(rows, out_dir / f"bench-retrieval-{stamp}.png"))

    for path in written:
        click.echo(str(path))


@main.command()
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.pass_context
@fail_on_domain_errors
def serve(ctx, host, port):
    """Run the HTTP service (and the web UI when its bundle is built)."""
    import uvicorn

    overrides = {}
    if host:
        overrides["host"] = host
    if port:
        overrides["port"] = port
    config = load_config(ctx.obj["config_file"], overrides={**ctx.obj["overrides"], **overrides})
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


if __name__ == "__main__":
    main()
