"""Parser for recorded listing-review page snapshots.

Walks the page's HTML for the review container and extracts one Review
per review block, in document order. The selector set is a fixed dialect
(class names and data attributes); when a page matches neither the
container nor any block, the parser reports LayoutNotRecognized rather
than guessing, which is exactly the manual-maintenance cost a scraping
pipeline carries when the upstream markup shifts.

Built on the stdlib HTML parser: no external dependency, entity decoding
included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from html.parser import HTMLParser

from .errors import LayoutNotRecognized, SchemaMismatch
from .models import Review, ReviewerInfo, ReviewerType, StayInfo

__all__ = ["ParsedPage", "parse_snapshot", "parse_reviews_page"]

_CONTAINER_CLASS = "review-list"
_CARD_CLASS = "review-card"
_NEXT_CLASS = "pagination-next"

# class name on a child element -> captured text field
_TEXT_FIELDS = {
    "review-title": "title",
    "review-score": "score",
    "review-positive": "positive",
    "review-negative": "negative",
    "review-manager-reply": "manager_reply",
    "reviewer-name": "reviewer_name",
}

_VOID_TAGS = {"img", "br", "meta", "link", "input", "hr", "source"}


@dataclass
class _Card:
    attrs: dict[str, str]
    texts: dict[str, str] = field(default_factory=dict)
    date_attr: str | None = None
    country: str | None = None
    reviewer_type: str | None = None
    stay: dict[str, str] | None = None
    likes: str | None = None
    photos: list[str] = field(default_factory=list)


class _SnapshotParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.saw_container = False
        self.cards: list[_Card] = []
        self.next_href: str | None = None
        self._card: _Card | None = None
        self._card_depth = 0
        self._depth = 0
        self._capture: str | None = None
        self._capture_depth = 0
        self._buffer: list[str] = []

    @staticmethod
    def _classes(attrs: dict[str, str]) -> set[str]:
        return set((attrs.get("class") or "").split())

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        classes = self._classes(attrs)
        if tag not in _VOID_TAGS:
            self._depth += 1

        if _CONTAINER_CLASS in classes:
            self.saw_container = True
        if _NEXT_CLASS in classes and tag == "a":
            self.next_href = attrs.get("href")

        if _CARD_CLASS in classes and tag == "article":
            self._card = _Card(attrs=attrs)
            self._card_depth = self._depth
            return

        card = self._card
        if card is None:
            return
        for class_name, field_name in _TEXT_FIELDS.items():
            if class_name in classes:
                self._capture = field_name
                self._capture_depth = self._depth
                self._buffer = []
                return
        if "review-date" in classes:
            card.date_attr = attrs.get("datetime")
        elif "reviewer-country" in classes:
            card.country = attrs.get("data-code")
        elif "reviewer-type" in classes:
            card.reviewer_type = attrs.get("data-type")
        elif "stay-info" in classes:
            card.stay = {
                "nights": attrs.get("data-nights", ""),
                "checkin": attrs.get("data-checkin", ""),
                "checkout": attrs.get("data-checkout", ""),
            }
        elif "review-likes" in classes:
            card.likes = attrs.get("data-count")
        elif "review-photo" in classes and tag == "img":
            src = attrs.get("src")
            if src:
                card.photos.append(src)

    def handle_data(self, data):
        if self._capture is not None:
            self._buffer.append(data)

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS:
            return
        if self._capture is not None and self._depth == self._capture_depth:
            text = " ".join("".join(self._buffer).split())
            if self._card is not None and text:
                self._card.texts[self._capture] = text
            self._capture = None
        if self._card is not None and self._depth == self._card_depth:
            self.cards.append(self._card)
            self._card = None
        self._depth -= 1


@dataclass(frozen=True)
class ParsedPage:
    reviews: tuple[Review, ...]
    next_page: str | None


def _review_from_card(card: _Card) -> Review:
    review_id = card.attrs.get("data-review-id")
    if not review_id:
        raise SchemaMismatch("review block has no data-review-id")
    if card.date_attr is None:
        raise SchemaMismatch(f"review {review_id} has no date")
    if "score" not in card.texts:
        raise SchemaMismatch(f"review {review_id} has no score")
    try:
        published = date.fromisoformat(card.date_attr)
        score = float(card.texts["score"])
    except ValueError as exc:
        raise SchemaMismatch(f"review {review_id}: {exc}") from exc

    reviewer_type = None
    if card.reviewer_type:
        value = card.reviewer_type.lower()
        reviewer_type = (
            ReviewerType(value) if value in {t.value for t in ReviewerType} else ReviewerType.UNKNOWN
        )
    stay = None
    if card.stay and card.stay["nights"]:
        try:
            stay = StayInfo(
                nights=int(card.stay["nights"]),
                check_in=date.fromisoformat(card.stay["checkin"]),
                check_out=date.fromisoformat(card.stay["checkout"]),
            )
        except ValueError as exc:
            raise SchemaMismatch(f"review {review_id} has bad stay data: {exc}") from exc

    return Review(
        review_id=review_id,
        listing_id="",
        published_at=published,
        score=score,
        title=card.texts.get("title"),
        positive_text=card.texts.get("positive"),
        negative_text=card.texts.get("negative"),
        manager_reply=card.texts.get("manager_reply"),
        reviewer=ReviewerInfo(
            username=card.texts.get("reviewer_name"),
            country=card.country.upper() if card.country else None,
            reviewer_type=reviewer_type,
        ),
        stay=stay,
        likes=int(card.likes) if card.likes else 0,
        photo_urls=tuple(card.photos),
        language_hint=card.attrs.get("data-lang"),
    )


def parse_snapshot(html: bytes | str) -> ParsedPage:
    text = html.decode("utf-8") if isinstance(html, bytes) else html
    parser = _SnapshotParser()
    parser.feed(text)
    parser.close()
    if not parser.saw_container and not parser.cards:
        raise LayoutNotRecognized(
            "page matches neither the review container nor any review block; "
            "the snapshot dialect likely needs a selector update"
        )
    reviews = tuple(_review_from_card(card) for card in parser.cards)
    return ParsedPage(reviews=reviews, next_page=parser.next_href)


def parse_reviews_page(html: bytes | str) -> list[Review]:
    """Extract every review block on one recorded page, in page order."""
    return list(parse_snapshot(html).reviews)
