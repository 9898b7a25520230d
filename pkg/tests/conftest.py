from __future__ import annotations

from datetime import date, timedelta

import pytest

from reviewlens.clocks import SimulatedClock
from reviewlens.models import Listing, Review, ReviewCorpus, validate_listing_url

FIXTURE_URL = "https://www.booking.com/hotel/gr/seaside-apartments.html"
GOLDEN_URL = "https://www.booking.com/hotel/gr/athens-harbor-view.html"
API_URL = "https://www.booking.com/hotel/it/roma-central-suites.html"
EMPTY_URL = "https://www.booking.com/hotel/es/plaza-nueva.html"


@pytest.fixture
def clock() -> SimulatedClock:
    return SimulatedClock()


@pytest.fixture
def listing() -> Listing:
    return validate_listing_url(FIXTURE_URL)


def make_review(i: int, listing_id: str = "", **overrides) -> Review:
    defaults = dict(
        review_id=f"r{i:03d}",
        listing_id=listing_id,
        published_at=date(2024, 1, 1) + timedelta(days=i % 365),
        score=float(i % 11),
        positive_text=f"positive text {i}",
    )
    defaults.update(overrides)
    return Review(**defaults)


def make_corpus(reviews, listing: Listing | None = None, source: str = "fixture") -> ReviewCorpus:
    listing = listing or validate_listing_url(FIXTURE_URL)
    reviews = tuple(r.with_listing(listing.listing_id) for r in reviews)
    return ReviewCorpus(
        listing=listing,
        reviews=reviews,
        fetched_at="2025-01-01T00:00:00+00:00",
        source=source,
    )


# Synthetic corpus whose rendered segments are each exactly 440 characters
# (110 tokens at 4 chars/token): header line is 20 chars, "+ " framing and
# three newlines add 5 more, so the positive text is padded to 415.
SEGMENT_CHARS = 440
_POSITIVE_LEN = 415
_FILLER = "spotless rooms quiet nights friendly hosts great value "


def synthetic_review(i: int, n_total: int = 200) -> Review:
    text = (_FILLER * 10)[:_POSITIVE_LEN]
    return Review(
        review_id=f"s{i:03d}",
        listing_id="",
        published_at=date(2024, 1, 1),
        score=8.0,
        positive_text=text,
    )


def synthetic_corpus(n: int = 200) -> ReviewCorpus:
    return make_corpus([synthetic_review(i, n) for i in range(n)])


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {name}: {status}")
