"""Canonical on-disk corpus format and the corpus cache.

A corpus document is UTF-8 line-delimited JSON: a header record carrying
the listing, fetched_at, and source, followed by one review record per
line using the Review schema field names verbatim. Absent optional fields
are omitted from the record, never serialized as empty strings.

The cache stores one document per listing as ``<listing_id>.corpus``; the
header's fetched_at is the TTL stamp consulted on read.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path

from .clocks import Clock, SYSTEM_CLOCK
from .errors import SchemaMismatch
from .models import Listing, Platform, Review, ReviewCorpus, ReviewerInfo, ReviewerType, StayInfo

__all__ = [
    "review_to_record",
    "review_from_record",
    "dumps_corpus",
    "loads_corpus",
    "CorpusCache",
]


def review_to_record(review: Review) -> dict:
    """Review as a plain dict with schema field names; absent fields omitted."""
    record: dict = {
        "review_id": review.review_id,
        "published_at": review.published_at.isoformat(),
        "score": review.score,
    }
    if review.listing_id:
        record["listing_id"] = review.listing_id
    for name in ("title", "positive_text", "negative_text", "manager_reply", "language_hint"):
        value = getattr(review, name)
        if value is not None:
            record[name] = value
    reviewer: dict = {}
    if review.reviewer.username is not None:
        reviewer["username"] = review.reviewer.username
    if review.reviewer.country is not None:
        reviewer["country"] = review.reviewer.country
    if review.reviewer.reviewer_type is not None:
        reviewer["reviewer_type"] = review.reviewer.reviewer_type.value
    if reviewer:
        record["reviewer"] = reviewer
    if review.stay is not None:
        record["stay"] = {
            "nights": review.stay.nights,
            "check_in": review.stay.check_in.isoformat(),
            "check_out": review.stay.check_out.isoformat(),
        }
    if review.likes:
        record["likes"] = review.likes
    if review.photo_urls:
        record["photo_urls"] = list(review.photo_urls)
    return record


def review_from_record(record: dict) -> Review:
    try:
        reviewer_rec = record.get("reviewer") or {}
        rtype = reviewer_rec.get("reviewer_type")
        stay_rec = record.get("stay")
        stay = None
        if stay_rec is not None:
            stay = StayInfo(
                nights=int(stay_rec["nights"]),
                check_in=date.fromisoformat(stay_rec["check_in"]),
                check_out=date.fromisoformat(stay_rec["check_out"]),
            )
        return Review(
            review_id=record["review_id"],
            listing_id=record.get("listing_id", ""),
            published_at=date.fromisoformat(record["published_at"]),
            score=float(record["score"]),
            title=record.get("title"),
            positive_text=record.get("positive_text"),
            negative_text=record.get("negative_text"),
            manager_reply=record.get("manager_reply"),
            reviewer=ReviewerInfo(
                username=reviewer_rec.get("username"),
                country=reviewer_rec.get("country"),
                reviewer_type=ReviewerType(rtype) if rtype else None,
            ),
            stay=stay,
            likes=int(record.get("likes", 0)),
            photo_urls=tuple(record.get("photo_urls", ())),
            language_hint=record.get("language_hint"),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaMismatch(f"bad review record: {exc}") from exc


def dumps_corpus(corpus: ReviewCorpus) -> str:
    header = {
        "listing": {
            "url": corpus.listing.url,
            "listing_id": corpus.listing.listing_id,
            "platform": corpus.listing.platform.value,
            **({"name": corpus.listing.name} if corpus.listing.name else {}),
        },
        "fetched_at": corpus.fetched_at,
        "source": corpus.source,
    }
    lines = [json.dumps(header, ensure_ascii=False, sort_keys=True)]
    lines.extend(
        json.dumps(review_to_record(r), ensure_ascii=False, sort_keys=True) for r in corpus.reviews
    )
    return "\n".join(lines) + "\n"


def loads_corpus(text: str) -> ReviewCorpus:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise SchemaMismatch("empty corpus document")
    try:
        header = json.loads(lines[0])
        listing_rec = header["listing"]
        listing = Listing(
            url=listing_rec["url"],
            listing_id=listing_rec["listing_id"],
            platform=Platform(listing_rec.get("platform", "booking")),
            name=listing_rec.get("name"),
        )
        fetched_at = header["fetched_at"]
        source = header["source"]
    except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise SchemaMismatch(f"bad corpus header: {exc}") from exc
    reviews = tuple(review_from_record(json.loads(line)) for line in lines[1:])
    return ReviewCorpus(listing=listing, reviews=reviews, fetched_at=fetched_at, source=source)


@dataclass
class CorpusCache:
    """Flat-file corpus store with TTL-based freshness."""

    directory: Path
    ttl_seconds: float = 24 * 3600
    clock: Clock = SYSTEM_CLOCK

    def path_for(self, listing_id: str) -> Path:
        return Path(self.directory) / f"{listing_id}.corpus"

    def put(self, corpus: ReviewCorpus) -> Path:
        path = self.path_for(corpus.listing.listing_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_corpus(corpus), encoding="utf-8")
        return path

    def get(self, listing_id: str, *, allow_stale: bool = False) -> ReviewCorpus | None:
        path = self.path_for(listing_id)
        if not path.exists():
            return None
        corpus = loads_corpus(path.read_text(encoding="utf-8"))
        if not allow_stale and not self.is_fresh(corpus):
            return None
        return corpus

    def is_fresh(self, corpus: ReviewCorpus) -> bool:
        try:
            stamp = datetime.fromisoformat(corpus.fetched_at)
        except ValueError:
            return False
        age = (self.clock.utcnow() - stamp).total_seconds()
        return 0 <= age < self.ttl_seconds
