"""Shared error taxonomy.

Every error carries a stable ``code`` so the CLI and HTTP layers can emit
machine-readable failures without string-matching exception text.
"""

from __future__ import annotations


class ReviewLensError(Exception):
    """Base class for all domain errors."""

    code = "internal_error"
    http_status = 500

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# --- listing / review domain ------------------------------------------------

class MalformedUrl(ReviewLensError):
    code = "malformed_url"
    http_status = 400


class UnsupportedHost(ReviewLensError):
    code = "unsupported_host"
    http_status = 400


class SchemaMismatch(ReviewLensError):
    code = "schema_mismatch"
    http_status = 400


class ScoreOutOfRange(ReviewLensError):
    code = "score_out_of_range"
    http_status = 400


class InvalidReview(ReviewLensError):
    code = "invalid_review"
    http_status = 400


class InvalidCorpus(ReviewLensError):
    code = "invalid_corpus"
    http_status = 400


# --- ingestion ----------------------------------------------------------------

class ProviderDisabled(ReviewLensError):
    code = "provider_disabled"
    http_status = 503


class NetworkFailure(ReviewLensError):
    """Transient transport failure; the fetch retry policy applies."""

    code = "network_failure"
    http_status = 502
    retriable = True


class NoReviewsFound(ReviewLensError):
    code = "no_reviews_found"
    http_status = 404


class ProviderQuotaExceeded(ReviewLensError):
    code = "provider_quota_exceeded"
    http_status = 429


class UnknownProvider(ReviewLensError):
    code = "unknown_provider"
    http_status = 400


class LayoutNotRecognized(ReviewLensError):
    """The snapshot parser matched zero review blocks and no review container."""

    code = "layout_not_recognized"
    http_status = 502


# --- retrieval / packing ------------------------------------------------------

class BudgetTooSmall(ReviewLensError):
    code = "budget_too_small"
    http_status = 422


class EmptyQuery(ReviewLensError):
    code = "empty_query"
    http_status = 400


class PlanCorpusMismatch(ReviewLensError):
    code = "plan_corpus_mismatch"
    http_status = 500


# --- llm gateway ----------------------------------------------------------------

class UnknownModel(ReviewLensError):
    code = "unknown_model"
    http_status = 400


class DuplicateModel(ReviewLensError):
    code = "duplicate_model"
    http_status = 400


class ModelUnavailable(ReviewLensError):
    code = "model_unavailable"
    http_status = 502


class ContextOverflow(ReviewLensError):
    code = "context_overflow"
    http_status = 422


class CompletionTimeout(ReviewLensError):
    code = "timeout"
    http_status = 504


class ProviderError(ReviewLensError):
    code = "provider_error"
    http_status = 502

    def __init__(self, message: str = "", status: int | None = None, retriable: bool = False):
        super().__init__(message)
        self.status = status
        self.retriable = retriable


# --- insight engine -------------------------------------------------------------

class EmptyCorpus(ReviewLensError):
    code = "empty_corpus"
    http_status = 422


class EmptyQuestion(ReviewLensError):
    code = "empty_question"
    http_status = 400


class MissingBinding(ReviewLensError):
    code = "missing_binding"
    http_status = 500


class UnknownPlaceholder(ReviewLensError):
    code = "unknown_placeholder"
    http_status = 500


class InvalidTemplate(ReviewLensError):
    code = "invalid_template"
    http_status = 500


# --- bench / reports -------------------------------------------------------------

class EmptyInput(ReviewLensError):
    code = "empty_input"
    http_status = 400


class EmptyReport(ReviewLensError):
    code = "empty_report"
    http_status = 400


# --- service ---------------------------------------------------------------------

class JobNotReady(ReviewLensError):
    code = "job_not_ready"
    http_status = 409


class UnknownListing(ReviewLensError):
    code = "unknown_listing"
    http_status = 404


class InvalidTransition(ReviewLensError):
    code = "invalid_transition"
    http_status = 500


class ConfigError(ReviewLensError):
    code = "config_error"
    http_status = 500
