"""Token estimation, context-window budgeting, and review packing.

Token counts use a model-independent heuristic (default: ceil(chars / 4))
so budget math is deterministic and dependency-free. Each review is
rendered into a fixed text block; the per-review token estimate covers the
block *including its framing*, and packing measures the concatenated
context as it grows, so a plan's total_tokens always equals the token
estimate of the exact string build_context returns.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .bm25 import rank_reviews_bm25
from .errors import BudgetTooSmall, PlanCorpusMismatch
from .models import Review, ReviewCorpus

__all__ = [
    "TokenizerConfig",
    "TokenBudget",
    "PlanEntry",
    "RetrievalPlan",
    "estimate_tokens",
    "render_review_block",
    "review_segment",
    "select_reviews_for_budget",
    "build_context",
]


@dataclass(frozen=True)
class TokenizerConfig:
    """Token estimation strategy.

    ``chars_per_token``: ceil(len(text) / k), k > 0 (default 4).
    ``words_times_factor``: ceil(whitespace_word_count * factor).
    """

    strategy: str = "chars_per_token"
    chars_per_token: int = 4
    words_factor: float = 1.3

    def __post_init__(self):
        if self.strategy not in ("chars_per_token", "words_times_factor"):
            raise ValueError(f"unknown tokenizer strategy {self.strategy!r}")
        if self.chars_per_token <= 0:
            raise ValueError("chars_per_token must be positive")
        if self.words_factor <= 0:
            raise ValueError("words_factor must be positive")

    def measure(self, text: str) -> int:
        """Raw unit count (chars or words). Additive over newline-separated
        concatenation, which is what lets packing run on cumulative counts."""
        if self.strategy == "chars_per_token":
            return len(text)
        return len(text.split())

    def tokens_from_units(self, units: int) -> int:
        if units <= 0:
            return 0
        if self.strategy == "chars_per_token":
            return -(-units // self.chars_per_token)
        return math.ceil(units * self.words_factor)


DEFAULT_TOKENIZER = TokenizerConfig()


def estimate_tokens(text: str, cfg: TokenizerConfig = DEFAULT_TOKENIZER) -> int:
    return cfg.tokens_from_units(cfg.measure(text))


@dataclass(frozen=True)
class TokenBudget:
    """Prompt-side token budget for one completion.

    ``available`` is what remains for review context after the prompt
    template's own overhead; the completion reserve is spent on the output
    side of the window, not here.
    """

    prompt_window: int
    template_overhead: int
    completion_reserve: int
    available: int = field(init=False)

    def __post_init__(self):
        available = self.prompt_window - self.template_overhead
        if available < 0:
            raise BudgetTooSmall(
                f"template overhead {self.template_overhead} exceeds prompt window {self.prompt_window}"
            )
        object.__setattr__(self, "available", available)


@dataclass(frozen=True)
class PlanEntry:
    review_id: str
    estimated_tokens: int
    relevance_score: float | None = None


@dataclass(frozen=True)
class RetrievalPlan:
    """The ordered, budget-fitting review subset chosen for one prompt."""

    selected: tuple[PlanEntry, ...]
    total_tokens: int
    dropped_count: int
    selection_mode: str  # "recency" | "relevance"

    def digest(self) -> str:
        text = "\n".join(self.log_lines())
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def log_lines(self) -> list[str]:
        """Diagnostic log serialization: one line per selected review."""
        lines = []
        for entry in self.selected:
            score = "-" if entry.relevance_score is None else f"{entry.relevance_score:.6f}"
            lines.append(f"{entry.review_id}\t{entry.estimated_tokens}\t{score}")
        return lines


def render_review_block(review: Review) -> str:
    """One deterministic context block: date + score header, then the
    positive ("+") and negative ("-") lines. Absent fields are omitted."""
    header = f"[{review.published_at.isoformat()}] score {review.score:g}"
    if review.title:
        header += f" | {review.title}"
    lines = [header]
    if review.positive_text:
        lines.append(f"+ {review.positive_text}")
    if review.negative_text:
        lines.append(f"- {review.negative_text}")
    return "\n".join(lines)


def review_segment(review: Review) -> str:
    """Block plus its framing separator; contexts are concatenations of these."""
    return render_review_block(review) + "\n\n"


def select_reviews_for_budget(
    corpus: ReviewCorpus,
    budget: TokenBudget,
    mode: str = "recency",
    query: str | None = None,
    tokenizer: TokenizerConfig = DEFAULT_TOKENIZER,
) -> RetrievalPlan:
    """Greedy prefix packing of reviews into the budget.

    Recency mode walks the corpus default order; relevance mode walks the
    BM25 ranking for ``query``. Packing stops at the first review whose
    inclusion would push the concatenated context past ``budget.available``
    tokens, so under recency the selection is exactly the longest fitting
    prefix of the corpus. Raises BudgetTooSmall when not even one review
    fits a non-empty corpus.
    """
    if mode == "recency":
        ordered: list[tuple[Review, float | None]] = [(r, None) for r in corpus.reviews]
    elif mode == "relevance":
        if query is None:
            raise ValueError("relevance mode requires a query")
        ranking = rank_reviews_bm25(corpus, query)
        by_id = {r.review_id: r for r in corpus.reviews}
        ordered = [(by_id[review_id], score) for review_id, score in ranking]
    else:
        raise ValueError(f"unknown selection mode {mode!r}")

    selected: list[PlanEntry] = []
    cumulative_units = 0
    for review, score in ordered:
        segment = review_segment(review)
        candidate_units = cumulative_units + tokenizer.measure(segment)
        if tokenizer.tokens_from_units(candidate_units) > budget.available:
            break
        cumulative_units = candidate_units
        selected.append(
            PlanEntry(
                review_id=review.review_id,
                estimated_tokens=estimate_tokens(segment, tokenizer),
                relevance_score=score,
            )
        )
    if not selected and len(corpus) > 0:
        raise BudgetTooSmall(
            f"no review fits in {budget.available} available tokens"
        )
    return RetrievalPlan(
        selected=tuple(selected),
        total_tokens=tokenizer.tokens_from_units(cumulative_units),
        dropped_count=len(corpus) - len(selected),
        selection_mode=mode,
    )


def build_context(plan: RetrievalPlan, corpus: ReviewCorpus) -> str:
    """Concatenate the planned review blocks, in plan order."""
    pieces = []
    for entry in plan.selected:
        review = corpus.get(entry.review_id)
        if review is None:
            raise PlanCorpusMismatch(f"plan references unknown review {entry.review_id!r}")
        pieces.append(review_segment(review))
    return "".join(pieces)
