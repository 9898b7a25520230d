"""Summarization and question answering over a review corpus.

Builds a budget-fitting retrieval plan, renders a versioned prompt
template, dispatches exactly one completion through the gateway, and
returns an InsightResult carrying usage, cost, latency, and the template
identity for auditability.

Summaries pack reviews by recency and are cached per (listing, model,
language, corpus digest); questions rank reviews by lexical relevance
first and are never cached. When no selected review matches any question
term, the result is flagged and its text leads with the standardized
lack-of-data notice.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from importlib import resources
from typing import Mapping

from .clocks import Clock, SYSTEM_CLOCK
from .errors import (
    EmptyCorpus,
    EmptyQuery,
    EmptyQuestion,
    InvalidTemplate,
    MissingBinding,
    UnknownPlaceholder,
)
from .gateway import CompletionRequest, LlmGateway
from .models import ReviewCorpus
from .registry import ModelProfile, format_usd
from .retrieval import (
    DEFAULT_TOKENIZER,
    RetrievalPlan,
    TokenBudget,
    TokenizerConfig,
    build_context,
    estimate_tokens,
    select_reviews_for_budget,
)

__all__ = [
    "INSUFFICIENT_EVIDENCE_NOTICE",
    "PromptTemplate",
    "SummaryRequest",
    "QueryRequest",
    "InsightResult",
    "InsightEngine",
    "render_prompt",
    "load_template",
    "load_default_templates",
    "detect_insufficient_evidence",
]

INSUFFICIENT_EVIDENCE_NOTICE = "Not enough evidence in the reviews to answer this question."

# Output tokens reserved per completion: the model's completion window,
# capped here.
MAX_COMPLETION_RESERVE = 1024

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")
_LANGUAGE_RE = re.compile(r"^[A-Za-z]{2,3}(-[A-Za-z0-9]+)?$")

_REQUIRED_PLACEHOLDERS = {
    "summary": ("language", "context"),
    "query": ("language", "context", "question"),
}


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    role: str  # "summary" | "query"
    version: str
    system_text: str
    user_text: str

    def placeholders(self) -> tuple[str, ...]:
        return tuple(_PLACEHOLDER_RE.findall(self.system_text + self.user_text))

    def __post_init__(self):
        if self.role not in _REQUIRED_PLACEHOLDERS:
            raise InvalidTemplate(f"unknown template role {self.role!r}")
        found = self.placeholders()
        required = _REQUIRED_PLACEHOLDERS[self.role]
        for name in required:
            if found.count(name) != 1:
                raise InvalidTemplate(
                    f"template {self.template_id!r} must reference {{{name}}} exactly once"
                )
        extras = set(found) - set(required)
        if extras:
            raise InvalidTemplate(f"template {self.template_id!r} has unknown placeholders {extras}")


def render_prompt(template: PromptTemplate, bindings: Mapping[str, str]) -> tuple[str, str]:
    """Bind all placeholders; deterministic byte output."""
    expected = set(template.placeholders())
    missing = expected - set(bindings)
    if missing:
        raise MissingBinding(f"unbound placeholders: {sorted(missing)}")
    unknown = set(bindings) - expected
    if unknown:
        raise UnknownPlaceholder(f"bindings not in template: {sorted(unknown)}")
    system_text = template.system_text
    user_text = template.user_text
    for name, value in bindings.items():
        token = "{" + name + "}"
        system_text = system_text.replace(token, value)
        user_text = user_text.replace(token, value)
    return system_text, user_text


def _parse_template_file(text: str, template_id: str, role: str, version: str) -> PromptTemplate:
    if "[system]" not in text or "[user]" not in text:
        raise InvalidTemplate(f"template {template_id!r} must have [system] and [user] sections")
    system_text = text.split("[system]\n", 1)[1].split("[user]\n")[0].rstrip("\n")
    user_text = text.split("[user]\n", 1)[1].rstrip("\n")
    return PromptTemplate(
        template_id=template_id, role=role, version=version, system_text=system_text, user_text=user_text
    )


def load_template(role: str, version: str = "v1") -> PromptTemplate:
    name = f"{role}_{version}.txt"
    text = resources.files("reviewlens.templates").joinpath(name).read_text("utf-8")
    return _parse_template_file(text, template_id=role, role=role, version=version)


def load_default_templates() -> dict[str, PromptTemplate]:
    return {"summary": load_template("summary"), "query": load_template("query")}


@dataclass(frozen=True)
class SummaryRequest:
    listing_id: str
    language: str = "en"
    model_id: str = "mock"

    def __post_init__(self):
        if not _LANGUAGE_RE.match(self.language):
            raise ValueError(f"language must be an ISO code, got {self.language!r}")


@dataclass(frozen=True)
class QueryRequest:
    listing_id: str
    question: str
    language: str = "en"
    model_id: str = "mock"

    def __post_init__(self):
        if not self.question.strip():
            raise EmptyQuestion("question is empty after trimming")
        if not _LANGUAGE_RE.match(self.language):
            raise ValueError(f"language must be an ISO code, got {self.language!r}")


@dataclass(frozen=True)
class InsightResult:
    kind: str  # "summary" | "answer"
    text: str
    model_id: str
    plan_digest: str
    input_tokens: int
    output_tokens: int
    cost: Decimal
    latency_s: float
    insufficient_evidence: bool
    language: str
    template_id: str
    template_version: str

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "text": self.text,
            "model_id": self.model_id,
            "plan_digest": self.plan_digest,
            "usage": {"input_tokens": self.input_tokens, "output_tokens": self.output_tokens},
            "cost_usd": format_usd(self.cost),
            "latency_s": self.latency_s,
            "insufficient_evidence": self.insufficient_evidence,
            "language": self.language,
            "template": {"id": self.template_id, "version": self.template_version},
        }


def detect_insufficient_evidence(plan: RetrievalPlan, question: str) -> bool:
    """True iff no selected review matches any term of the question."""
    if plan.selection_mode != "relevance":
        raise ValueError("insufficient-evidence detection needs a relevance-mode plan")
    return sum(entry.relevance_score or 0.0 for entry in plan.selected) == 0.0


class InsightEngine:
    def __init__(
        self,
        gateway: LlmGateway,
        templates: Mapping[str, PromptTemplate] | None = None,
        tokenizer: TokenizerConfig = DEFAULT_TOKENIZER,
        clock: Clock = SYSTEM_CLOCK,
        cache_ttl_s: float = 24 * 3600,
        cache_enabled: bool = True,
        temperature: float = 0.2,
    ):
        self.gateway = gateway
        self.templates = dict(templates) if templates is not None else load_default_templates()
        self.tokenizer = tokenizer
        self.clock = clock
        self.cache_ttl_s = cache_ttl_s
        self.cache_enabled = cache_enabled
        self.temperature = temperature
        self._summary_cache: dict[tuple, tuple[float, InsightResult]] = {}

    def budget_for(self, profile: ModelProfile, role: str, language: str, question: str = "") -> TokenBudget:
        """Budget with the template's own overhead already subtracted, so
        packing is closed over the final rendered prompt."""
        template = self.templates[role]
        bindings = {"language": language, "context": ""}
        if "question" in template.placeholders():
            bindings["question"] = question
        system_text, user_text = render_prompt(template, bindings)
        overhead = estimate_tokens(system_text + user_text, self.tokenizer)
        reserve = min(profile.completion_window, MAX_COMPLETION_RESERVE)
        return TokenBudget(
            prompt_window=profile.prompt_window, template_overhead=overhead, completion_reserve=reserve
        )

    def summarize(self, corpus: ReviewCorpus, request: SummaryRequest) -> InsightResult:
        if len(corpus) == 0:
            raise EmptyCorpus(f"no reviews for listing {request.listing_id}")
        profile = self.gateway.lookup_model(request.model_id)
        cache_key = (request.listing_id, request.model_id, request.language, corpus.digest())
        cached = self._cache_get(cache_key)
        if cached is not None:
            return cached

        budget = self.budget_for(profile, "summary", request.language)
        plan = select_reviews_for_budget(corpus, budget, mode="recency", tokenizer=self.tokenizer)
        result = self._dispatch(
            corpus,
            plan,
            profile,
            template=self.templates["summary"],
            kind="summary",
            language=request.language,
            bindings={"language": request.language},
            insufficient=False,
        )
        self._cache_put(cache_key, result)
        return result

    def answer_query(self, corpus: ReviewCorpus, request: QueryRequest) -> InsightResult:
        if len(corpus) == 0:
            raise EmptyCorpus(f"no reviews for listing {request.listing_id}")
        question = request.question.strip()
        profile = self.gateway.lookup_model(request.model_id)
        budget = self.budget_for(profile, "query", request.language, question)
        try:
            plan = select_reviews_for_budget(
                corpus, budget, mode="relevance", query=question, tokenizer=self.tokenizer
            )
        except EmptyQuery as exc:
            raise EmptyQuestion(f"question {question!r} has no searchable terms") from exc
        insufficient = detect_insufficient_evidence(plan, question)
        return self._dispatch(
            corpus,
            plan,
            profile,
            template=self.templates["query"],
            kind="answer",
            language=request.language,
            bindings={"language": request.language, "question": question},
            insufficient=insufficient,
        )

    def _dispatch(
        self,
        corpus: ReviewCorpus,
        plan: RetrievalPlan,
        profile: ModelProfile,
        template: PromptTemplate,
        kind: str,
        language: str,
        bindings: dict[str, str],
        insufficient: bool,
    ) -> InsightResult:
        context = build_context(plan, corpus)
        system_text, user_text = render_prompt(template, {**bindings, "context": context})
        prompt_tokens = estimate_tokens(system_text + user_text, self.tokenizer)
        if prompt_tokens > profile.prompt_window:
            # Packing math should make this unreachable; never rely on the
            # gateway guard alone.
            raise AssertionError(
                f"rendered prompt of {prompt_tokens} tokens exceeds {profile.model_id}'s window"
            )
        response = self.gateway.complete(
            CompletionRequest(
                model_id=profile.model_id,
                system_text=system_text,
                user_text=user_text,
                max_output_tokens=min(profile.completion_window, MAX_COMPLETION_RESERVE),
                temperature=self.temperature,
            )
        )
        text = response.text
        if insufficient and INSUFFICIENT_EVIDENCE_NOTICE not in text:
            text = INSUFFICIENT_EVIDENCE_NOTICE + "\n\n" + text
        return InsightResult(
            kind=kind,
            text=text,
            model_id=profile.model_id,
            plan_digest=plan.digest(),
            input_tokens=response.input_tokens,
            output_tokens=response.output_tokens,
            cost=response.cost,
            latency_s=response.latency_s,
            insufficient_evidence=insufficient,
            language=language,
            template_id=template.template_id,
            template_version=template.version,
        )

    # -- summary cache ---------------------------------------------------

    def _cache_get(self, key: tuple) -> InsightResult | None:
        if not self.cache_enabled:
            return None
        hit = self._summary_cache.get(key)
        if hit is None:
            return None
        expires_at, result = hit
        if self.clock.now() >= expires_at:
            del self._summary_cache[key]
            return None
        return result

    def _cache_put(self, key: tuple, result: InsightResult) -> None:
        if self.cache_enabled:
            self._summary_cache[key] = (self.clock.now() + self.cache_ttl_s, result)

    def clear_cache(self) -> None:
        self._summary_cache.clear()
