"""Pluggable review-retrieval providers and the fetch orchestrator.

Four providers share one interface: the snapshot scraper (recorded HTML
pages), two API-schema adapters exercised against recorded response
documents, and the fixture provider that reads canonical corpus files.
A live scraping seam exists but ships disabled: enabling it takes both a
config flag and an explicit acknowledgment string, since scraping the
production platform is a terms-of-service problem outside research use.

The orchestrator serializes fetches of the same listing, retries only on
transient network failures (two backed-off retries on an injectable
clock), applies the requested sort before truncation, stamps metrics, and
writes every result through the corpus cache.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Protocol

from .clocks import Clock, SYSTEM_CLOCK
from .corpus_io import CorpusCache, loads_corpus
from .errors import (
    EmptyInput,
    NetworkFailure,
    NoReviewsFound,
    ProviderDisabled,
    ProviderQuotaExceeded,
    SchemaMismatch,
    UnknownProvider,
)
from .models import Listing, Review, ReviewCorpus, default_order_key
from .normalize import normalize_review
from .scrape import parse_snapshot

__all__ = [
    "FetchRequest",
    "FetchMetrics",
    "ProviderConfig",
    "ReviewProvider",
    "FixtureProvider",
    "SnapshotScraperProvider",
    "ArelFixtureProvider",
    "CaprolokFixtureProvider",
    "LiveScrapeProvider",
    "ReviewFetcher",
    "DEFAULT_PROVIDER_CONFIGS",
    "LIVE_SCRAPE_ACK",
    "estimate_fetch_cost",
    "record_fetch_comparison",
    "default_fixture_root",
]

SORTS = ("newest_first", "score_desc", "score_asc")

# Wording a config must reproduce verbatim to arm the live scraper.
LIVE_SCRAPE_ACK = "I accept the platform terms-of-service risk"

_RETRY_BACKOFF_S = (1.0, 2.0)  # two retries after the initial attempt


@dataclass(frozen=True)
class FetchRequest:
    listing: Listing
    max_reviews: int = 200
    sort: str = "newest_first"

    def __post_init__(self):
        if self.max_reviews < 1:
            raise ValueError("max_reviews must be at least 1")
        if self.sort not in SORTS:
            raise ValueError(f"sort must be one of {SORTS}, got {self.sort!r}")


@dataclass(frozen=True)
class FetchMetrics:
    provider: str
    reviews_returned: int
    wall_time: float
    monetary_cost: Decimal
    pages_fetched: int

    def __post_init__(self):
        if self.wall_time < 0 or self.monetary_cost < 0:
            raise ValueError("wall_time and monetary_cost must be non-negative")


@dataclass(frozen=True)
class ProviderConfig:
    provider_id: str
    cost_per_1000_reviews: Decimal
    maintenance: str
    credentials_env: str | None = None
    enabled: bool = True

    def __post_init__(self):
        if self.cost_per_1000_reviews < 0:
            raise ValueError("cost must be non-negative")


DEFAULT_PROVIDER_CONFIGS: dict[str, ProviderConfig] = {
    "fixture": ProviderConfig("fixture", Decimal("0"), maintenance="none (local documents)"),
    "snapshot": ProviderConfig("snapshot", Decimal("0"), maintenance="high (manual selector updates)"),
    "arel": ProviderConfig(
        "arel", Decimal("1.50"), maintenance="none (SaaS managed)", credentials_env="AREL_API_TOKEN"
    ),
    "caprolok": ProviderConfig(
        "caprolok", Decimal("1.00"), maintenance="none (SaaS managed)", credentials_env="CAPROLOK_API_TOKEN"
    ),
    "live-scrape": ProviderConfig(
        "live-scrape", Decimal("0"), maintenance="high (manual selector updates)", enabled=False
    ),
}


def estimate_fetch_cost(
    provider: str, n_reviews: int, configs: dict[str, ProviderConfig] | None = None
) -> Decimal:
    """Linear per-review pricing: cost_per_1000 x n / 1000, exact decimal."""
    configs = configs or DEFAULT_PROVIDER_CONFIGS
    if provider not in configs:
        raise UnknownProvider(f"provider {provider!r} is not registered")
    if n_reviews < 0:
        raise ValueError("n_reviews must be non-negative")
    return configs[provider].cost_per_1000_reviews * Decimal(n_reviews) / Decimal(1000)


def default_fixture_root() -> Path:
    import reviewlens

    return Path(reviewlens.__file__).parent / "fixtures" / "listings"


class ReviewProvider(Protocol):
    provider_id: str

    def fetch_raw(self, request: FetchRequest) -> tuple[list[Review], int]:
        """Return (reviews in provider order, pages fetched)."""
        ...


class _FixtureBacked:
    def __init__(self, fixture_root: Path | None = None):
        self.fixture_root = Path(fixture_root) if fixture_root else default_fixture_root()

    def _listing_dir(self, listing: Listing) -> Path:
        return self.fixture_root / listing.listing_id


class FixtureProvider(_FixtureBacked):
    """Serves canonical corpus documents recorded under the fixture root."""

    provider_id = "fixture"

    def fetch_raw(self, request: FetchRequest) -> tuple[list[Review], int]:
        path = self._listing_dir(request.listing) / "reviews.corpus"
        if not path.exists():
            raise NoReviewsFound(f"no recorded corpus for {request.listing.url}")
        corpus = loads_corpus(path.read_text(encoding="utf-8"))
        return list(corpus.reviews), 1


class SnapshotScraperProvider(_FixtureBacked):
    """Parses recorded review-page snapshots, following next-page links
    until the request is satisfied or pages run out."""

    provider_id = "snapshot"

    def fetch_raw(self, request: FetchRequest) -> tuple[list[Review], int]:
        directory = self._listing_dir(request.listing) / "snapshot"
        page_name = "page1.html"
        reviews: list[Review] = []
        pages = 0
        while page_name:
            path = directory / page_name
            if not path.exists():
                if pages == 0:
                    raise NoReviewsFound(f"no recorded snapshot for {request.listing.url}")
                break
            parsed = parse_snapshot(path.read_bytes())
            pages += 1
            reviews.extend(parsed.reviews)
            if len(reviews) >= request.max_reviews:
                break
            page_name = parsed.next_page
        return reviews, pages


class _ApiFixtureAdapter(_FixtureBacked):
    """Shared machinery for the API-schema adapters: read the recorded
    response document, normalize records via the registered schema."""

    provider_id = "api"
    document_name = "override.json"
    schema = "override"

    def __init__(self, fixture_root: Path | None = None, clock: Clock = SYSTEM_CLOCK):
        super().__init__(fixture_root)
        self.clock = clock

    def fetch_raw(self, request: FetchRequest) -> tuple[list[Review], int]:
        path = self._listing_dir(request.listing) / self.document_name
        if not path.exists():
            raise NoReviewsFound(f"no recorded {self.provider_id} response for {request.listing.url}")
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaMismatch(f"bad {self.provider_id} document: {exc}") from exc
        if isinstance(payload, dict):
            if payload.get("error") == "quota_exceeded":
                raise ProviderQuotaExceeded(f"{self.provider_id} monthly quota exhausted")
            payload = payload.get("reviews", [])
        today = self.clock.utcnow().date()
        reviews = [normalize_review(record, self.schema, today=today) for record in payload]
        return reviews, 1


class ArelFixtureProvider(_ApiFixtureAdapter):
    provider_id = "arel"
    document_name = "arel.json"
    schema = "arel"


class CaprolokFixtureProvider(_ApiFixtureAdapter):
    provider_id = "caprolok"
    document_name = "caprolok.json"
    schema = "caprolok"


class LiveScrapeProvider:
    """Live-page scraping seam. Compiled in, disabled by default: fetching
    requires the config flag plus the verbatim acknowledgment string."""

    provider_id = "live-scrape"

    def __init__(self, enabled: bool = False, acknowledgment: str = ""):
        self.enabled = enabled
        self.acknowledgment = acknowledgment

    def fetch_raw(self, request: FetchRequest) -> tuple[list[Review], int]:
        if not self.enabled or self.acknowledgment != LIVE_SCRAPE_ACK:
            raise ProviderDisabled(
                "live scraping is disabled; set the live-scrape flag and the acknowledgment "
                "string to enable it deliberately"
            )
        import httpx

        reviews: list[Review] = []
        pages = 0
        url: str | None = request.listing.url
        while url and len(reviews) < request.max_reviews:
            try:
                response = httpx.get(url, timeout=30.0, follow_redirects=True)
            except httpx.HTTPError as exc:
                raise NetworkFailure(str(exc)) from exc
            if response.status_code >= 500:
                raise NetworkFailure(f"upstream returned {response.status_code}")
            if response.status_code != 200:
                raise NoReviewsFound(f"upstream returned {response.status_code}")
            parsed = parse_snapshot(response.content)
            pages += 1
            reviews.extend(parsed.reviews)
            url = parsed.next_page and str(httpx.URL(url).join(parsed.next_page))
        return reviews, pages


def _sorted_for(sort: str, reviews: list[Review]) -> list[Review]:
    if sort == "newest_first":
        return sorted(reviews, key=default_order_key)
    if sort == "score_desc":
        return sorted(reviews, key=lambda r: (-r.score, default_order_key(r)))
    return sorted(reviews, key=lambda r: (r.score, default_order_key(r)))


class ReviewFetcher:
    """Front door for review retrieval: provider dispatch, retry, sorting,
    truncation, metrics, and cache write-through."""

    def __init__(
        self,
        providers: dict[str, ReviewProvider] | None = None,
        configs: dict[str, ProviderConfig] | None = None,
        cache: CorpusCache | None = None,
        clock: Clock = SYSTEM_CLOCK,
        fixture_root: Path | None = None,
    ):
        if providers is None:
            providers = {
                "fixture": FixtureProvider(fixture_root),
                "snapshot": SnapshotScraperProvider(fixture_root),
                "arel": ArelFixtureProvider(fixture_root, clock=clock),
                "caprolok": CaprolokFixtureProvider(fixture_root, clock=clock),
                "live-scrape": LiveScrapeProvider(),
            }
        self.providers = providers
        self.configs = configs or DEFAULT_PROVIDER_CONFIGS
        self.cache = cache
        self.clock = clock
        self._listing_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, listing_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._listing_locks.get(listing_id)
            if lock is None:
                lock = self._listing_locks[listing_id] = threading.Lock()
            return lock

    def fetch_reviews(self, request: FetchRequest, provider_id: str) -> tuple[ReviewCorpus, FetchMetrics]:
        provider = self.providers.get(provider_id)
        if provider is None:
            raise UnknownProvider(f"provider {provider_id!r} is not registered")
        config = self.configs.get(provider_id)
        if config is not None and not config.enabled:
            raise ProviderDisabled(f"provider {provider_id!r} is disabled by configuration")

        with self._lock_for(request.listing.listing_id):
            started = self.clock.now()
            raw_reviews, pages = self._fetch_with_retry(provider, request)
            wall_time = self.clock.now() - started

            if not raw_reviews:
                raise NoReviewsFound(f"provider {provider_id!r} returned no reviews for {request.listing.url}")

            bound = [r.with_listing(request.listing.listing_id) for r in raw_reviews]
            selected = _sorted_for(request.sort, bound)[: request.max_reviews]
            corpus = ReviewCorpus(
                listing=request.listing,
                reviews=tuple(selected),
                fetched_at=self.clock.utcnow().isoformat(),
                source=provider_id,
            )
            if config is not None:
                cost = estimate_fetch_cost(provider_id, len(selected), self.configs)
            else:
                cost = Decimal("0")
            metrics = FetchMetrics(
                provider=provider_id,
                reviews_returned=len(selected),
                wall_time=wall_time,
                monetary_cost=cost,
                pages_fetched=pages,
            )
            if self.cache is not None:
                self.cache.put(corpus)
            return corpus, metrics

    def _fetch_with_retry(self, provider: ReviewProvider, request: FetchRequest):
        attempt = 0
        while True:
            try:
                return provider.fetch_raw(request)
            except NetworkFailure:
                if attempt >= len(_RETRY_BACKOFF_S):
                    raise
                self.clock.sleep(_RETRY_BACKOFF_S[attempt])
                attempt += 1


def record_fetch_comparison(
    runs: list[FetchMetrics], configs: dict[str, ProviderConfig] | None = None
) -> list[dict]:
    """One comparison row per provider: mean wall time, unit cost,
    throughput, and the maintenance class. Fastest provider first."""
    if not runs:
        raise EmptyInput("no fetch runs to compare")
    configs = configs or DEFAULT_PROVIDER_CONFIGS
    by_provider: dict[str, list[FetchMetrics]] = {}
    for metrics in runs:
        by_provider.setdefault(metrics.provider, []).append(metrics)

    rows = []
    for provider_id, samples in by_provider.items():
        total_time = sum(m.wall_time for m in samples)
        total_reviews = sum(m.reviews_returned for m in samples)
        config = configs.get(provider_id)
        rows.append(
            {
                "provider": provider_id,
                "runs": len(samples),
                "mean_wall_time_s": total_time / len(samples),
                "cost_per_1000": str(config.cost_per_1000_reviews) if config else "unknown",
                "reviews_per_sec": (total_reviews / total_time) if total_time > 0 else None,
                "maintenance": config.maintenance if config else "unknown",
            }
        )
    rows.sort(key=lambda row: row["mean_wall_time_s"])
    return rows
