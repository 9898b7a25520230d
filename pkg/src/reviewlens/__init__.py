"""Review-insight engine for short-rental listings.

Pluggable review retrieval, token-budgeted context packing, a
multi-provider LLM gateway with exact cost accounting, summarization and
question answering over review corpora, and an offline benchmark harness.
"""

from .bm25 import rank_reviews_bm25
from .clocks import SimulatedClock, SystemClock
from .gateway import CompletionRequest, CompletionResponse, LlmGateway
from .insight import InsightEngine, InsightResult, QueryRequest, SummaryRequest
from .models import (
    Listing,
    Review,
    ReviewCorpus,
    ReviewerInfo,
    StayInfo,
    corpus_stats,
    validate_listing_url,
)
from .normalize import normalize_review
from .providers import FetchMetrics, FetchRequest, ReviewFetcher, estimate_fetch_cost
from .registry import ModelProfile, ModelRegistry, RateLimitPolicy, estimate_cost, seed_registry
from .retrieval import TokenBudget, estimate_tokens, select_reviews_for_budget
from .scrape import parse_reviews_page

__version__ = "0.1.0"

__all__ = [
    "CompletionRequest",
    "CompletionResponse",
    "FetchMetrics",
    "FetchRequest",
    "InsightEngine",
    "InsightResult",
    "Listing",
    "LlmGateway",
    "ModelProfile",
    "ModelRegistry",
    "QueryRequest",
    "RateLimitPolicy",
    "Review",
    "ReviewCorpus",
    "ReviewerInfo",
    "ReviewFetcher",
    "SimulatedClock",
    "StayInfo",
    "SummaryRequest",
    "SystemClock",
    "TokenBudget",
    "corpus_stats",
    "estimate_cost",
    "estimate_fetch_cost",
    "estimate_tokens",
    "normalize_review",
    "parse_reviews_page",
    "rank_reviews_bm25",
    "seed_registry",
    "select_reviews_for_budget",
    "validate_listing_url",
]
