"""HTTP front door.

Thin, synchronous-looking handlers over the core library: listing
submission starts an asynchronous fetch job (API fetches can take tens of
seconds, far past a sane HTTP timeout), summaries come from the engine's
cache when fresh, questions are always answered live. Every response
carries an X-Request-Id header and lands one line in the request audit
log.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .audit import AuditLog
from .clocks import Clock, SYSTEM_CLOCK
from .config import ServiceConfig, load_config, validate_config
from .corpus_io import CorpusCache
from .errors import (
    EmptyQuestion,
    JobNotReady,
    ProviderDisabled,
    ReviewLensError,
    UnknownListing,
)
from .gateway import LlmGateway
from .insight import InsightEngine, QueryRequest, SummaryRequest
from .jobs import JobStore
from .llm_adapters import default_adapters
from .models import validate_listing_url
from .providers import (
    DEFAULT_PROVIDER_CONFIGS,
    FetchRequest,
    LiveScrapeProvider,
    ProviderConfig,
    ReviewFetcher,
)
from .registry import seed_registry

__all__ = ["AppState", "create_app", "build_state"]


class SubmitListingBody(BaseModel):
    url: str
    provider: str | None = None
    max_reviews: int = 200


class QueryBody(BaseModel):
    question: str
    lang: str | None = None
    model: str | None = None


@dataclass
class AppState:
    config: ServiceConfig
    clock: Clock
    engine: InsightEngine
    fetcher: ReviewFetcher
    cache: CorpusCache
    jobs: JobStore
    request_audit: AuditLog
    executor: ThreadPoolExecutor


def build_state(config: ServiceConfig | None = None, clock: Clock = SYSTEM_CLOCK) -> AppState:
    """Wire the full stack from configuration (shared by HTTP and CLI)."""
    config = config or load_config()
    registry = seed_registry()
    validate_config(config, registry)
    cache_dir = Path(config.cache_dir)

    gateway = LlmGateway(
        registry,
        adapters=default_adapters(clock=clock),
        clock=clock,
        live=config.live_llm,
        timeout_s=config.timeout_s,
        audit=AuditLog(cache_dir / "llm-audit.jsonl"),
    )
    engine = InsightEngine(gateway, clock=clock, cache_ttl_s=config.cache_ttl_s)
    cache = CorpusCache(cache_dir / "corpora", ttl_seconds=config.cache_ttl_s, clock=clock)

    configs = dict(DEFAULT_PROVIDER_CONFIGS)
    if config.live_scrape:
        configs["live-scrape"] = ProviderConfig(
            "live-scrape",
            configs["live-scrape"].cost_per_1000_reviews,
            maintenance=configs["live-scrape"].maintenance,
            enabled=True,
        )
    fetcher = ReviewFetcher(
        configs=configs, cache=cache, clock=clock, fixture_root=config.fixture_root
    )
    fetcher.providers["live-scrape"] = LiveScrapeProvider(
        enabled=config.live_scrape, acknowledgment=config.live_scrape_ack
    )

    return AppState(
        config=config,
        clock=clock,
        engine=engine,
        fetcher=fetcher,
        cache=cache,
        jobs=JobStore(cache_dir / "jobs", clock=clock),
        request_audit=AuditLog(cache_dir / "requests.jsonl"),
        executor=ThreadPoolExecutor(max_workers=4),
    )


def _run_fetch(state: AppState, job_id: str, request: FetchRequest, provider_id: str) -> None:
    try:
        state.jobs.transition(job_id, "fetching")
        corpus, _metrics = state.fetcher.fetch_reviews(request, provider_id)
        state.jobs.transition(job_id, "ready", review_count=len(corpus))
    except ReviewLensError as exc:
        state.jobs.transition(job_id, "failed", error=exc.code)
    except Exception as exc:  # pragma: no cover - defensive
        state.jobs.transition(job_id, "failed", error=f"internal: {exc}")


def create_app(
    config: ServiceConfig | None = None,
    state: AppState | None = None,
    clock: Clock = SYSTEM_CLOCK,
    static_dir: Path | str | None = None,
) -> FastAPI:
    state = state or build_state(config, clock=clock)
    app = FastAPI(title="reviewlens", version="0.1.0")
    app.state.core = state
    request_ids = itertools.count(1)

    @app.exception_handler(ReviewLensError)
    async def domain_error(request: Request, exc: ReviewLensError):
        return JSONResponse(
            status_code=exc.http_status, content={"error": exc.code, "message": str(exc)}
        )

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "invalid_parameter", "message": str(exc)})

    @app.middleware("http")
    async def audit_requests(request: Request, call_next):
        request_id = next(request_ids)
        response = await call_next(request)
        response.headers["X-Request-Id"] = str(request_id)
        state.request_audit.write(
            {
                "request_id": request_id,
                "ts": state.clock.utcnow().isoformat(),
                "method": request.method,
                "path": request.url.path,
                "status": response.status_code,
            }
        )
        return response

    @app.post("/api/listings")
    def submit_listing(body: SubmitListingBody):
        listing = validate_listing_url(body.url)
        provider_id = body.provider or state.config.default_provider
        provider_config = state.fetcher.configs.get(provider_id)
        if provider_config is not None and not provider_config.enabled:
            raise ProviderDisabled(f"provider {provider_id!r} is disabled")

        existing = state.jobs.get_by_listing(listing.listing_id)
        if existing is not None and existing.state == "ready":
            if state.cache.get(listing.listing_id) is not None:
                return JSONResponse(status_code=200, content=existing.as_dict())
        record, created = state.jobs.create_or_get(listing)
        if created:
            request = FetchRequest(listing, max_reviews=body.max_reviews)
            state.executor.submit(_run_fetch, state, record.job_id, request, provider_id)
        return JSONResponse(status_code=202 if created else 200, content=record.as_dict())

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        record = state.jobs.get(job_id)
        if record is None:
            raise UnknownListing(f"no job {job_id!r}")
        return record.as_dict()

    def _ready_corpus(listing_id: str):
        record = state.jobs.get_by_listing(listing_id)
        if record is None:
            raise UnknownListing(f"no listing {listing_id!r}; submit its URL first")
        if record.state != "ready":
            raise JobNotReady(f"job {record.job_id} is {record.state}")
        corpus = state.cache.get(listing_id)
        if corpus is None:
            raise JobNotReady("cached reviews expired; re-submit the listing URL")
        return corpus

    @app.get("/api/listings/{listing_id}/summary")
    def get_summary(listing_id: str, lang: str | None = None, model: str | None = None):
        corpus = _ready_corpus(listing_id)
        request = SummaryRequest(
            listing_id=listing_id,
            language=lang or state.config.default_language,
            model_id=model or state.config.default_model_id,
        )
        return state.engine.summarize(corpus, request).as_dict()

    @app.post("/api/listings/{listing_id}/query")
    def post_query(listing_id: str, body: QueryBody):
        if not body.question.strip():
            raise EmptyQuestion("question is empty")
        corpus = _ready_corpus(listing_id)
        request = QueryRequest(
            listing_id=listing_id,
            question=body.question,
            language=body.lang or state.config.default_language,
            model_id=body.model or state.config.default_model_id,
        )
        return state.engine.answer_query(corpus, request).as_dict()

    @app.get("/api/models")
    def list_models():
        models = [p.as_dict() for p in state.engine.gateway.registry.list_models()]
        return {"models": models}

    static_root = Path(static_dir) if static_dir else Path(__file__).parent.parent.parent / "frontend" / "dist"
    if static_root.is_dir():
        app.mount("/", StaticFiles(directory=static_root, html=True), name="ui")

    return app
