"""Provider record normalization.

Each review source returns its own record shape; the adapters here map
every registered shape onto the unified Review schema. Missing optional
fields become absent (``None``), never empty strings. Provider score
scales that differ from the platform's 0-10 scale are rescaled linearly
at this boundary.

Registered schemas:

* ``arel`` — flat records: publication date, score, title, liked/disliked
  text, and the listing manager's reply.
* ``caprolok`` — nested records adding reviewer info, booking info
  (nights, check-in/check-out), likes, and photos.
* ``unified`` — the canonical corpus record shape itself.
"""

from __future__ import annotations

from datetime import date
from typing import Any, Callable

from .corpus_io import review_from_record, review_to_record
from .errors import InvalidReview, SchemaMismatch
from .models import Review, ReviewerInfo, ReviewerType, StayInfo

__all__ = ["normalize_review", "serialize_review", "registered_schemas", "rescale_score"]


def rescale_score(value: float, scale: float) -> float:
    """Map a provider score on [0, scale] linearly onto [0, 10]."""
    if scale <= 0:
        raise SchemaMismatch(f"provider scale must be positive, got {scale}")
    return value * 10.0 / scale


def _clean(value: Any) -> str | None:
    if value is None:
        return None
    text = str(value).strip()
    return text or None


def _require(record: dict, key: str, source: str) -> Any:
    if key not in record or record[key] is None:
        raise SchemaMismatch(f"{source} record missing required field {key!r}")
    return record[key]


def _parse_date(value: Any, field: str, source: str) -> date:
    try:
        return date.fromisoformat(str(value))
    except ValueError as exc:
        raise SchemaMismatch(f"{source} record has bad {field}: {value!r}") from exc


_REVIEWER_TYPES = {t.value for t in ReviewerType}


def _from_arel(record: dict, scale: float) -> Review:
    published = _parse_date(_require(record, "review_date", "arel"), "review_date", "arel")
    score = rescale_score(float(_require(record, "rating", "arel")), scale)
    return Review(
        review_id=str(_require(record, "review_id", "arel")),
        listing_id=str(record.get("listing_id", "")),
        published_at=published,
        score=score,
        title=_clean(record.get("review_title")),
        positive_text=_clean(record.get("liked")),
        negative_text=_clean(record.get("disliked")),
        manager_reply=_clean(record.get("host_response")),
    )


def _to_arel(review: Review) -> dict:
    record = {
        "review_id": review.review_id,
        "review_date": review.published_at.isoformat(),
        "rating": review.score,
    }
    if review.listing_id:
        record["listing_id"] = review.listing_id
    if review.title is not None:
        record["review_title"] = review.title
    if review.positive_text is not None:
        record["liked"] = review.positive_text
    if review.negative_text is not None:
        record["disliked"] = review.negative_text
    if review.manager_reply is not None:
        record["host_response"] = review.manager_reply
    return record


def _from_caprolok(record: dict, scale: float) -> Review:
    published = _parse_date(_require(record, "reviewed_at", "caprolok"), "reviewed_at", "caprolok")
    score = rescale_score(float(_require(record, "rating", "caprolok")), scale)
    reviewer_rec = record.get("reviewer") or {}
    rtype = _clean(reviewer_rec.get("type"))
    if rtype is not None and rtype not in _REVIEWER_TYPES:
        rtype = ReviewerType.UNKNOWN.value
    country = _clean(reviewer_rec.get("country"))
    booking = record.get("booking")
    stay = None
    if booking:
        stay = StayInfo(
            nights=int(_require(booking, "nights", "caprolok.booking")),
            check_in=_parse_date(_require(booking, "checkin", "caprolok.booking"), "checkin", "caprolok"),
            check_out=_parse_date(_require(booking, "checkout", "caprolok.booking"), "checkout", "caprolok"),
        )
    return Review(
        review_id=str(_require(record, "review_id", "caprolok")),
        listing_id=str(record.get("hotel_id", "")),
        published_at=published,
        score=score,
        title=_clean(record.get("title")),
        positive_text=_clean(record.get("pros")),
        negative_text=_clean(record.get("cons")),
        manager_reply=_clean(record.get("property_reply")),
        reviewer=ReviewerInfo(
            username=_clean(reviewer_rec.get("username")),
            country=country.upper() if country else None,
            reviewer_type=ReviewerType(rtype) if rtype else None,
        ),
        stay=stay,
        likes=int(record.get("likes", 0)),
        photo_urls=tuple(record.get("photos", ())),
        language_hint=_clean(record.get("language")),
    )


def _to_caprolok(review: Review) -> dict:
    record: dict = {
        "review_id": review.review_id,
        "reviewed_at": review.published_at.isoformat(),
        "rating": review.score,
    }
    if review.listing_id:
        record["hotel_id"] = review.listing_id
    if review.title is not None:
        record["title"] = review.title
    if review.positive_text is not None:
        record["pros"] = review.positive_text
    if review.negative_text is not None:
        record["cons"] = review.negative_text
    if review.manager_reply is not None:
        record["property_reply"] = review.manager_reply
    reviewer: dict = {}
    if review.reviewer.username is not None:
        reviewer["username"] = review.reviewer.username
    if review.reviewer.country is not None:
        reviewer["country"] = review.reviewer.country
    if review.reviewer.reviewer_type is not None:
        reviewer["type"] = review.reviewer.reviewer_type.value
    if reviewer:
        record["reviewer"] = reviewer
    if review.stay is not None:
        record["booking"] = {
            "nights": review.stay.nights,
            "checkin": review.stay.check_in.isoformat(),
            "checkout": review.stay.check_out.isoformat(),
        }
    if review.likes:
        record["likes"] = review.likes
    if review.photo_urls:
        record["photos"] = list(review.photo_urls)
    if review.language_hint is not None:
        record["language"] = review.language_hint
    return record


_PARSERS: dict[str, Callable[[dict, float], Review]] = {
    "arel": _from_arel,
    "caprolok": _from_caprolok,
    "unified": lambda record, scale: review_from_record(record),
}

_SERIALIZERS: dict[str, Callable[[Review], dict]] = {
    "arel": _to_arel,
    "caprolok": _to_caprolok,
    "unified": review_to_record,
}


def registered_schemas() -> tuple[str, ...]:
    return tuple(sorted(_PARSERS))


def normalize_review(
    raw: dict,
    source: str,
    *,
    scale: float = 10.0,
    today: date | None = None,
) -> Review:
    """Map a provider-specific record onto the unified Review schema.

    ``scale`` is the provider's maximum score; scores are rescaled onto
    [0, 10]. When ``today`` is given, reviews dated in the future relative
    to it are rejected.
    """
    parser = _PARSERS.get(source)
    if parser is None:
        raise SchemaMismatch(f"no registered schema for source {source!r}")
    review = parser(raw, scale)
    if today is not None and review.published_at > today:
        raise InvalidReview(
            f"review {review.review_id} published {review.published_at}, after ingestion date {today}"
        )
    return review


def serialize_review(review: Review, source: str) -> dict:
    """Inverse of normalize_review for a registered schema (used to verify
    round-trip idempotence)."""
    serializer = _SERIALIZERS.get(source)
    if serializer is None:
        raise SchemaMismatch(f"no registered schema for source {source!r}")
    return serializer(review)
