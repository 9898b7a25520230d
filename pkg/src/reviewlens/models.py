"""Normalized domain model for listings and guest reviews.

All provider record shapes (scraped pages, API responses, fixture
documents) are mapped onto the single :class:`Review` schema defined here.
Types are frozen dataclasses: immutable after construction and safe to
share across concurrent request handlers.

Scores live on the platform's 0-10 scale. Optional text fields are
``None`` when absent, never empty strings, so prompt construction can skip
them instead of feeding the model blank sections.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from typing import Iterable
from urllib.parse import parse_qsl, urlencode, urlsplit, urlunsplit

from .errors import InvalidCorpus, InvalidReview, MalformedUrl, ScoreOutOfRange, UnsupportedHost

__all__ = [
    "Platform",
    "Listing",
    "ReviewerInfo",
    "StayInfo",
    "Review",
    "ReviewCorpus",
    "ReviewerType",
    "validate_listing_url",
    "canonicalize_url",
    "listing_id_for",
    "default_order_key",
    "corpus_stats",
]


class Platform(str, Enum):
    BOOKING = "booking"


class ReviewerType(str, Enum):
    SOLO = "solo"
    COUPLE = "couple"
    FAMILY = "family"
    GROUP = "group"
    BUSINESS = "business"
    UNKNOWN = "unknown"


# Host patterns accepted per platform. Subdomains are allowed.
_ALLOWED_HOSTS = {
    Platform.BOOKING: re.compile(r"(^|\.)booking\.com$"),
}

# Share links carry tracking parameters that must not change the cache key.
_TRACKING_PARAMS = ("aid", "label", "sid")
_TRACKING_PREFIXES = ("utm_",)

_COUNTRY_RE = re.compile(r"^[A-Z]{2}$")


def canonicalize_url(raw: str) -> str:
    """Canonical form: https scheme, lowercased host, no fragment, no
    tracking params, remaining query params sorted."""
    parts = urlsplit(raw.strip())
    if parts.scheme not in ("http", "https") or not parts.netloc:
        raise MalformedUrl(f"not an absolute http(s) url: {raw!r}")
    host = parts.hostname
    if not host:
        raise MalformedUrl(f"url has no host: {raw!r}")
    host = host.lower()
    port = parts.port
    netloc = host if port in (None, 80, 443) else f"{host}:{port}"
    kept = [
        (k, v)
        for k, v in parse_qsl(parts.query, keep_blank_values=True)
        if k not in _TRACKING_PARAMS and not k.startswith(_TRACKING_PREFIXES)
    ]
    query = urlencode(sorted(kept))
    return urlunsplit(("https", netloc, parts.path, query, ""))


def listing_id_for(canonical_url: str) -> str:
    return hashlib.sha256(canonical_url.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Listing:
    url: str
    listing_id: str
    platform: Platform = Platform.BOOKING
    name: str | None = None


def validate_listing_url(raw: str, name: str | None = None) -> Listing:
    """Validate and canonicalize a listing URL.

    Raises MalformedUrl for unparseable input and UnsupportedHost when the
    host is not on the platform allow-list. The returned listing_id is a
    stable hash of the canonical URL: the same URL (modulo tracking params,
    fragment, and host case) always maps to the same id.
    """
    canonical = canonicalize_url(raw)
    host = urlsplit(canonical).hostname or ""
    for platform, pattern in _ALLOWED_HOSTS.items():
        if pattern.search(host):
            return Listing(url=canonical, listing_id=listing_id_for(canonical), platform=platform, name=name)
    raise UnsupportedHost(f"host {host!r} is not a supported booking platform")


@dataclass(frozen=True)
class ReviewerInfo:
    username: str | None = None
    country: str | None = None
    reviewer_type: ReviewerType | None = None

    def __post_init__(self):
        if self.country is not None and not _COUNTRY_RE.match(self.country):
            raise InvalidReview(f"country must be a 2-letter code, got {self.country!r}")


@dataclass(frozen=True)
class StayInfo:
    nights: int
    check_in: date
    check_out: date

    def __post_init__(self):
        if self.check_out <= self.check_in:
            raise InvalidReview("check_out must be after check_in")
        span = (self.check_out - self.check_in).days
        if self.nights != span:
            raise InvalidReview(f"nights={self.nights} does not match stay span of {span} days")
        if self.nights < 1:
            raise InvalidReview("nights must be positive")


@dataclass(frozen=True)
class Review:
    """One normalized guest review.

    Invariants enforced at construction: score in [0, 10], at least one of
    title/positive_text/negative_text non-empty, likes non-negative.
    Publication dates are checked against the ingestion clock at the
    adapter boundary (the constructor has no clock).
    """

    review_id: str
    listing_id: str
    published_at: date
    score: float
    title: str | None = None
    positive_text: str | None = None
    negative_text: str | None = None
    manager_reply: str | None = None
    reviewer: ReviewerInfo = field(default_factory=ReviewerInfo)
    stay: StayInfo | None = None
    likes: int = 0
    photo_urls: tuple[str, ...] = ()
    language_hint: str | None = None

    def __post_init__(self):
        if not self.review_id:
            raise InvalidReview("review_id must be non-empty")
        if not (0.0 <= self.score <= 10.0):
            raise ScoreOutOfRange(f"score {self.score} outside [0, 10]")
        if not (self.title or self.positive_text or self.negative_text):
            raise InvalidReview(f"review {self.review_id} has no text at all")
        for name in ("title", "positive_text", "negative_text", "manager_reply"):
            if getattr(self, name) == "":
                raise InvalidReview(f"{name} must be absent (None) rather than empty")
        if self.likes < 0:
            raise InvalidReview("likes must be non-negative")
        if not isinstance(self.photo_urls, tuple):
            object.__setattr__(self, "photo_urls", tuple(self.photo_urls))

    def with_listing(self, listing_id: str) -> "Review":
        return replace(self, listing_id=listing_id)


def default_order_key(review: Review) -> tuple:
    """Total order for corpora: published_at descending, review_id ascending."""
    return (-review.published_at.toordinal(), review.review_id)


@dataclass(frozen=True)
class ReviewCorpus:
    """An ordered set of reviews for one listing.

    Reviews are re-sorted into the default order (newest first, ties by
    review_id) at construction, so two corpora over the same review set
    always compare equal regardless of input permutation.
    """

    listing: Listing
    reviews: tuple[Review, ...]
    fetched_at: str  # ISO-8601 UTC timestamp
    source: str

    def __post_init__(self):
        ordered = tuple(sorted(self.reviews, key=default_order_key))
        object.__setattr__(self, "reviews", ordered)
        seen: set[str] = set()
        for review in ordered:
            if review.review_id in seen:
                raise InvalidCorpus(f"duplicate review_id {review.review_id!r}")
            seen.add(review.review_id)

    def __len__(self) -> int:
        return len(self.reviews)

    def get(self, review_id: str) -> Review | None:
        for review in self.reviews:
            if review.review_id == review_id:
                return review
        return None

    def digest(self) -> str:
        """Content digest: stable across refetches of identical reviews."""
        hasher = hashlib.sha256()
        hasher.update(self.listing.listing_id.encode())
        for review in self.reviews:
            hasher.update(b"\x00")
            hasher.update(repr(review).encode("utf-8"))
        return hasher.hexdigest()[:16]


def corpus_stats(corpus: ReviewCorpus | Iterable[Review]) -> dict:
    """Count, mean score, per-point histogram, and date range.

    Empty input yields count 0 and a ``None`` mean (the undefined flag);
    histogram buckets are [0,1), ..., [8,9), [9,10].
    """
    reviews = corpus.reviews if isinstance(corpus, ReviewCorpus) else tuple(corpus)
    histogram = [0] * 10
    for review in reviews:
        bucket = min(int(review.score), 9)
        histogram[bucket] += 1
    if not reviews:
        return {"count": 0, "mean_score": None, "score_histogram": histogram, "date_range": None}
    mean = sum(r.score for r in reviews) / len(reviews)
    dates = [r.published_at for r in reviews]
    return {
        "count": len(reviews),
        "mean_score": mean,
        "score_histogram": histogram,
        "date_range": (min(dates), max(dates)),
    }
