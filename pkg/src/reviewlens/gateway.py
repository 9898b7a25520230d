"""Uniform completion interface over provider adapters.

One ``complete`` call per request: the gateway checks the prompt against
the model's context window before any dispatch, acquires a rate-limit
permit when the model carries a policy (sleeping on the injected clock
until capacity frees), measures latency around the adapter call only, and
prices the response with exact decimal arithmetic.

Offline is the default: every model dispatches to the deterministic mock
adapter unless live dispatch is switched on, in which case the profile's
provider names the wire adapter to use. The ``mock`` model id resolves to
a built-in zero-cost profile that is not part of the seeded registry, so
the model listing stays exactly the seed table.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Mapping

from .audit import AuditLog
from .clocks import Clock, SYSTEM_CLOCK
from .errors import ContextOverflow, ModelUnavailable, ProviderError, UnknownModel
from .llm_adapters import CompletionAdapter, default_adapters
from .ratelimit import TOKEN_REQUEST_TOO_LARGE, SlidingWindowLimiter
from .registry import ModelProfile, ModelRegistry, estimate_cost
from .retrieval import DEFAULT_TOKENIZER, TokenizerConfig, estimate_tokens

__all__ = ["CompletionRequest", "CompletionResponse", "LlmGateway", "MOCK_PROFILE", "DEFAULT_TIMEOUT_S"]

DEFAULT_TIMEOUT_S = 60.0

MOCK_PROFILE = ModelProfile(
    model_id="mock",
    display_name="Deterministic mock",
    release_date="n/a",
    input_cost_per_1m=Decimal(0),
    output_cost_per_1m=Decimal(0),
    prompt_window=128000,
    completion_window=16384,
    provider="mock",
    note="offline test double; echoes prompt diagnostics",
)


@dataclass(frozen=True)
class CompletionRequest:
    model_id: str
    system_text: str
    user_text: str
    max_output_tokens: int = 1024
    temperature: float = 0.2

    def __post_init__(self):
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must be in [0, 2]")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    input_tokens: int
    output_tokens: int
    latency_s: float
    cost: Decimal
    provider_raw_id: str


class LlmGateway:
    def __init__(
        self,
        registry: ModelRegistry,
        adapters: Mapping[str, CompletionAdapter] | None = None,
        clock: Clock = SYSTEM_CLOCK,
        live: bool = False,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        audit: AuditLog | None = None,
        tokenizer: TokenizerConfig = DEFAULT_TOKENIZER,
    ):
        self.registry = registry
        self.adapters = dict(adapters) if adapters is not None else default_adapters(clock=clock)
        self.clock = clock
        self.live = live
        self.timeout_s = timeout_s
        self.audit = audit
        self.tokenizer = tokenizer
        self.completions_dispatched = 0
        self._limiters: dict[str, SlidingWindowLimiter] = {}

    def lookup_model(self, model_id: str) -> ModelProfile:
        try:
            return self.registry.lookup_model(model_id)
        except UnknownModel:
            if model_id == MOCK_PROFILE.model_id:
                return MOCK_PROFILE
            raise

    def _limiter_for(self, profile: ModelProfile) -> SlidingWindowLimiter | None:
        if profile.rate_policy is None:
            return None
        limiter = self._limiters.get(profile.model_id)
        if limiter is None:
            limiter = SlidingWindowLimiter(profile.rate_policy, clock=self.clock)
            self._limiters[profile.model_id] = limiter
        return limiter

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        profile = self.lookup_model(request.model_id)
        if not profile.available:
            raise ModelUnavailable(f"model {profile.model_id!r} is marked unavailable: {profile.note}")

        prompt_tokens = estimate_tokens(request.system_text + request.user_text, self.tokenizer)
        if prompt_tokens > profile.prompt_window:
            raise ContextOverflow(
                f"estimated {prompt_tokens} prompt tokens exceed {profile.model_id}'s "
                f"window of {profile.prompt_window}"
            )

        limiter = self._limiter_for(profile)
        if limiter is not None:
            self._wait_for_permit(limiter, prompt_tokens + request.max_output_tokens, profile)

        adapter_name = profile.provider if self.live else "mock"
        adapter = self.adapters.get(adapter_name)
        if adapter is None:
            raise ProviderError(f"no adapter registered for provider {adapter_name!r}")

        started = self.clock.now()
        result = adapter.complete(request, profile, self.timeout_s)
        latency = self.clock.now() - started

        input_tokens = result.input_tokens if result.input_tokens is not None else prompt_tokens
        output_tokens = (
            result.output_tokens
            if result.output_tokens is not None
            else estimate_tokens(result.text, self.tokenizer)
        )
        cost = estimate_cost(profile, input_tokens, output_tokens)
        self.completions_dispatched += 1
        if self.audit is not None:
            self.audit.write(
                {
                    "ts": self.clock.utcnow().isoformat(),
                    "model_id": profile.model_id,
                    "input_tokens": input_tokens,
                    "output_tokens": output_tokens,
                    "cost": str(cost),
                    "latency_s": latency,
                }
            )
        return CompletionResponse(
            text=result.text,
            input_tokens=input_tokens,
            output_tokens=output_tokens,
            latency_s=latency,
            cost=cost,
            provider_raw_id=result.raw_id,
        )

    def _wait_for_permit(self, limiter: SlidingWindowLimiter, tokens: int, profile: ModelProfile) -> None:
        for _ in range(10_000):
            decision = limiter.acquire_permit(tokens)
            if decision.granted:
                return
            if decision.reason == TOKEN_REQUEST_TOO_LARGE:
                raise ProviderError(
                    f"request of {tokens} tokens can never fit {profile.model_id}'s "
                    f"{profile.rate_policy.tokens_per_minute} tokens-per-minute window",
                    retriable=False,
                )
            self.clock.sleep(decision.retry_after)
        raise ProviderError(f"could not acquire a rate-limit permit for {profile.model_id}")
