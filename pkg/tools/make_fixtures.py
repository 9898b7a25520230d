#!/usr/bin/env python3
"""Regenerate the generated fixture data (deterministic, no RNG).

Currently produces:
  * the 200-review corpus document for the seaside-apartments listing,
    where every review renders to a context segment of exactly 440
    characters (110 tokens under the chars/4 estimator);
  * the empty-listing documents for plaza-nueva;
  * the fixture index mapping canonical URLs to listing ids.

Hand-authored fixtures (the HTML snapshots and the API-shaped response
documents) are NOT touched here; edit those directly.
"""

from __future__ import annotations

import json
from datetime import date, timedelta
from pathlib import Path

from reviewlens.corpus_io import dumps_corpus
from reviewlens.models import Review, ReviewCorpus, ReviewerInfo, ReviewerType, validate_listing_url
from reviewlens.retrieval import review_segment

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "reviewlens" / "fixtures"

SEASIDE_URL = "https://www.booking.com/hotel/gr/seaside-apartments.html"
GOLDEN_URL = "https://www.booking.com/hotel/gr/athens-harbor-view.html"
API_URL = "https://www.booking.com/hotel/it/roma-central-suites.html"
EMPTY_URL = "https://www.booking.com/hotel/es/plaza-nueva.html"

SEGMENT_TARGET = 440

TITLES = [
    None,
    None,
    "Right by the beach",
    None,
    "Great value",
    None,
    None,
    "Family friendly",
    None,
    "Would book again",
]

POSITIVES = [
    "Ten steps from the sand and the host greeted us with fresh fruit.",
    "Fast wifi in every room made remote work painless.",
    "Free parking right behind the building, never had to circle the block.",
    "The balcony sunsets over the bay were the highlight of our week.",
    "Spotless kitchen with everything needed for simple dinners.",
    "Quiet bedrooms even in August, great blackout blinds.",
    "Washing machine and drying rack saved us with two kids along.",
    "Check-in was fully self service and worked on the first try.",
    "Supermarket and bakery within two minutes on foot.",
    "Air conditioning in both bedrooms, bliss after the beach.",
]

NEGATIVES = [
    None,
    "Street parking fills up by early evening.",
    None,
    None,
    "Shower pressure is weak on the top floor.",
    None,
    "The sofa bed is thin, fine for one night only.",
    None,
    None,
    "Wifi dropped briefly twice during video calls.",
]

SCORES = [9.2, 8.4, 7.1, 9.6, 6.3, 8.8, 7.7, 10.0, 5.4, 8.1]

COUNTRIES = ["GR", "DE", "GB", "FR", "IT", "NL", "SE", "PL", "AT", "ES"]
TYPES = [
    ReviewerType.COUPLE,
    ReviewerType.FAMILY,
    ReviewerType.SOLO,
    ReviewerType.GROUP,
    ReviewerType.BUSINESS,
]

FILLER = (
    " The rest of the stay went smoothly and we would gladly book the same"
    " place again for a future visit to the coast, since everything that"
    " mattered to us simply worked without any fuss at all."
)


def seaside_review(i: int, listing_id: str) -> Review:
    published = date(2024, 12, 15) - timedelta(days=i)
    base = Review(
        review_id=f"sr-{1000 + i:04d}",
        listing_id=listing_id,
        published_at=published,
        score=SCORES[i % len(SCORES)],
        title=TITLES[i % len(TITLES)],
        positive_text=POSITIVES[i % len(POSITIVES)],
        negative_text=NEGATIVES[i % len(NEGATIVES)],
        reviewer=ReviewerInfo(
            username=f"guest{i:03d}",
            country=COUNTRIES[i % len(COUNTRIES)],
            reviewer_type=TYPES[i % len(TYPES)],
        ),
        likes=i % 7,
        language_hint="en",
    )
    deficit = SEGMENT_TARGET - len(review_segment(base))
    if deficit < 10:
        raise SystemExit(f"review {i} leaves only {deficit} padding chars; shorten the base text")
    padding = (FILLER * 3)[:deficit]
    padded = base.positive_text + padding
    review = Review(
        review_id=base.review_id,
        listing_id=base.listing_id,
        published_at=base.published_at,
        score=base.score,
        title=base.title,
        positive_text=padded,
        negative_text=base.negative_text,
        reviewer=base.reviewer,
        likes=base.likes,
        language_hint=base.language_hint,
    )
    assert len(review_segment(review)) == SEGMENT_TARGET
    return review


def main() -> None:
    seaside = validate_listing_url(SEASIDE_URL, name="Seaside Apartments")
    reviews = tuple(seaside_review(i, seaside.listing_id) for i in range(200))
    corpus = ReviewCorpus(
        listing=seaside,
        reviews=reviews,
        fetched_at="2024-12-31T12:00:00+00:00",
        source="fixture",
    )
    seaside_dir = FIXTURES / "listings" / seaside.listing_id
    seaside_dir.mkdir(parents=True, exist_ok=True)
    (seaside_dir / "reviews.corpus").write_text(dumps_corpus(corpus), encoding="utf-8")
    print(f"wrote {seaside_dir / 'reviews.corpus'} ({len(reviews)} reviews)")

    empty = validate_listing_url(EMPTY_URL, name="Plaza Nueva")
    empty_dir = FIXTURES / "listings" / empty.listing_id
    (empty_dir / "snapshot").mkdir(parents=True, exist_ok=True)
    empty_corpus = ReviewCorpus(listing=empty, reviews=(), fetched_at="2024-12-31T12:00:00+00:00", source="fixture")
    (empty_dir / "reviews.corpus").write_text(dumps_corpus(empty_corpus), encoding="utf-8")
    (empty_dir / "arel.json").write_text("[]\n", encoding="utf-8")
    (empty_dir / "caprolok.json").write_text("[]\n", encoding="utf-8")
    (empty_dir / "snapshot" / "page1.html").write_text(
        "<!DOCTYPE html>\n<html><body>\n"
        '<section class="review-list" data-listing="plaza-nueva">\n'
        '  <p class="no-reviews">No guest reviews yet.</p>\n'
        "</section>\n</body></html>\n",
        encoding="utf-8",
    )
    print(f"wrote empty-listing documents under {empty_dir}")

    index = {
        SEASIDE_URL: validate_listing_url(SEASIDE_URL).listing_id,
        GOLDEN_URL: validate_listing_url(GOLDEN_URL).listing_id,
        API_URL: validate_listing_url(API_URL).listing_id,
        EMPTY_URL: validate_listing_url(EMPTY_URL).listing_id,
    }
    (FIXTURES / "index.json").write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {FIXTURES / 'index.json'}")


if __name__ == "__main__":
    main()
