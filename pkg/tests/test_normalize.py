from __future__ import annotations

from datetime import date

import pytest
from hypothesis import given, strategies as st

from conftest import make_review
from reviewlens.errors import InvalidReview, SchemaMismatch, ScoreOutOfRange
from reviewlens.models import ReviewerInfo, ReviewerType, StayInfo
from reviewlens.normalize import normalize_review, registered_schemas, rescale_score, serialize_review

AREL_RECORD = {
    "review_id": "a-77",
    "review_date": "2024-05-12",
    "rating": 8.6,
    "review_title": "Lovely harbour view",
    "liked": "Spotless apartment, five minutes from the metro.",
    "disliked": "The lift is tiny.",
    "host_response": "Thank you for staying with us!",
}

CAPROLOK_RECORD = {
    "hotel_id": "h-1",
    "room_id": "rm-2",
    "review_id": "c-31",
    "reviewed_at": "2024-04-02",
    "rating": 9.0,
    "title": "Would come back",
    "pros": "Comfortable bed, fast wifi.",
    "cons": "Parking is three blocks away.",
    "property_reply": "Glad you enjoyed it.",
    "reviewer": {"username": "takis", "avatar_url": "https://img.example/a.png", "country": "gr", "type": "family"},
    "booking": {"nights": 3, "checkin": "2024-03-28", "checkout": "2024-03-31"},
    "likes": 4,
    "photos": ["https://img.example/p1.jpg"],
    "language": "el",
}


def test_arel_record_maps_all_four_text_fields():
    review = normalize_review(AREL_RECORD, "arel")
    assert review.title == "Lovely harbour view"
    assert review.positive_text.startswith("Spotless")
    assert review.negative_text == "The lift is tiny."
    assert review.manager_reply == "Thank you for staying with us!"
    assert review.score == pytest.approx(8.6)
    assert review.published_at == date(2024, 5, 12)


def test_caprolok_record_maps_stay_consistently():
    review = normalize_review(CAPROLOK_RECORD, "caprolok")
    assert review.stay == StayInfo(nights=3, check_in=date(2024, 3, 28), check_out=date(2024, 3, 31))
    assert review.reviewer.reviewer_type is ReviewerType.FAMILY
    assert review.reviewer.country == "GR"
    assert review.likes == 4
    assert review.photo_urls == ("https://img.example/p1.jpg",)
    assert review.language_hint == "el"


def test_score_out_of_range():
    with pytest.raises(ScoreOutOfRange):
        normalize_review({**AREL_RECORD, "rating": 11}, "arel")


def test_missing_required_field():
    record = dict(AREL_RECORD)
    del record["review_date"]
    with pytest.raises(SchemaMismatch):
        normalize_review(record, "arel")


def test_unknown_schema():
    with pytest.raises(SchemaMismatch):
        normalize_review(AREL_RECORD, "tripfeed")


def test_blank_optional_fields_become_absent():
    record = {**AREL_RECORD, "disliked": "   ", "host_response": None}
    review = normalize_review(record, "arel")
    assert review.negative_text is None
    assert review.manager_reply is None


def test_future_publication_rejected():
    with pytest.raises(InvalidReview):
        normalize_review(AREL_RECORD, "arel", today=date(2024, 5, 11))
    assert normalize_review(AREL_RECORD, "arel", today=date(2024, 5, 12))


def test_five_point_scale_is_rescaled():
    record = {**AREL_RECORD, "rating": 4.5}
    review = normalize_review(record, "arel", scale=5.0)
    assert review.score == pytest.approx(9.0)
    assert rescale_score(5.0, 5.0) == pytest.approx(10.0)


def test_unknown_reviewer_type_maps_to_unknown():
    record = {**CAPROLOK_RECORD, "reviewer": {"type": "digital nomad"}}
    review = normalize_review(record, "caprolok")
    assert review.reviewer.reviewer_type is ReviewerType.UNKNOWN


reviews = st.builds(
    make_review,
    st.integers(min_value=0, max_value=500),
    title=st.one_of(st.none(), st.text(min_size=1, max_size=30).map(str.strip).map(lambda s: s or None)),
    negative_text=st.one_of(st.none(), st.sampled_from(["noisy", "cold water", "no parking nearby"])),
    manager_reply=st.one_of(st.none(), st.sampled_from(["thanks", "sorry to hear"])),
    likes=st.integers(min_value=0, max_value=50),
)


@pytest.mark.parametrize("schema", registered_schemas())
@given(review=reviews)
def test_normalize_is_idempotent_over_serialization(schema, review):
    record = serialize_review(review, schema)
    again = normalize_review(record, schema)
    assert serialize_review(again, schema) == record
    if schema in ("caprolok", "unified"):
        assert again == review.with_listing(again.listing_id)
