"""Model registry: per-model pricing, context windows, and rate policies.

The registry ships seeded from a human-editable JSON file with one record
per model row. Monetary rates are exact decimals (USD per 1M tokens);
cost arithmetic never touches binary floats, and rounding (half-even, six
fractional digits) happens only at display time via :func:`format_usd`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from importlib import resources
from pathlib import Path

from .errors import DuplicateModel, UnknownModel

__all__ = [
    "RateLimitPolicy",
    "ModelProfile",
    "ModelRegistry",
    "estimate_cost",
    "format_usd",
    "seed_registry",
]

_ONE_MILLION = Decimal(1_000_000)
_USD_DISPLAY = Decimal("0.000001")


@dataclass(frozen=True)
class RateLimitPolicy:
    requests_per_minute: int | None = None
    requests_per_day: int | None = None
    tokens_per_minute: int | None = None

    def __post_init__(self):
        for name in ("requests_per_minute", "requests_per_day", "tokens_per_minute"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive when present")


@dataclass(frozen=True)
class ModelProfile:
    model_id: str
    display_name: str
    release_date: str
    input_cost_per_1m: Decimal
    output_cost_per_1m: Decimal
    prompt_window: int
    completion_window: int
    open_source: bool = False
    provider: str = "mock"
    rate_policy: RateLimitPolicy | None = None
    available: bool = True
    note: str | None = None

    def __post_init__(self):
        if self.prompt_window <= 0 or self.completion_window <= 0:
            raise ValueError("context windows must be positive")
        if self.input_cost_per_1m < 0 or self.output_cost_per_1m < 0:
            raise ValueError("costs must be non-negative")

    def as_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "display_name": self.display_name,
            "release_date": self.release_date,
            "input_cost_per_1m": format_usd(self.input_cost_per_1m),
            "output_cost_per_1m": format_usd(self.output_cost_per_1m),
            "prompt_window": self.prompt_window,
            "completion_window": self.completion_window,
            "open_source": self.open_source,
            "provider": self.provider,
            "available": self.available,
            "rate_policy": None
            if self.rate_policy is None
            else {
                "requests_per_minute": self.rate_policy.requests_per_minute,
                "requests_per_day": self.rate_policy.requests_per_day,
                "tokens_per_minute": self.rate_policy.tokens_per_minute,
            },
            "note": self.note,
        }


def estimate_cost(profile: ModelProfile, input_tokens: int, output_tokens: int) -> Decimal:
    """Exact decimal cost: tokens x rate / 1M per side, no rounding.

    Exactness makes the arithmetic linear: splitting a call into parts
    never changes the summed cost.
    """
    if input_tokens < 0 or output_tokens < 0:
        raise ValueError("token counts must be non-negative")
    return (
        Decimal(input_tokens) * profile.input_cost_per_1m
        + Decimal(output_tokens) * profile.output_cost_per_1m
    ) / _ONE_MILLION


def format_usd(amount: Decimal) -> str:
    """Display form: six fractional digits, round half-even."""
    return str(amount.quantize(_USD_DISPLAY, rounding=ROUND_HALF_EVEN))


@dataclass
class ModelRegistry:
    """Append-only, read-mostly model table."""

    _profiles: dict[str, ModelProfile] = field(default_factory=dict)

    def register_model(self, profile: ModelProfile) -> None:
        if profile.model_id in self._profiles:
            raise DuplicateModel(f"model {profile.model_id!r} already registered")
        self._profiles[profile.model_id] = profile

    def lookup_model(self, model_id: str) -> ModelProfile:
        try:
            return self._profiles[model_id]
        except KeyError:
            raise UnknownModel(f"model {model_id!r} is not registered") from None

    def __contains__(self, model_id: str) -> bool:
        return model_id in self._profiles

    def list_models(self) -> tuple[ModelProfile, ...]:
        return tuple(self._profiles.values())

    def __len__(self) -> int:
        return len(self._profiles)


def _profile_from_record(record: dict) -> ModelProfile:
    policy = record.get("rate_policy")
    return ModelProfile(
        model_id=record["model_id"],
        display_name=record["display_name"],
        release_date=record["release_date"],
        input_cost_per_1m=Decimal(record["input_cost_per_1m"]),
        output_cost_per_1m=Decimal(record["output_cost_per_1m"]),
        prompt_window=int(record["prompt_window"]),
        completion_window=int(record["completion_window"]),
        open_source=bool(record.get("open_source", False)),
        provider=record.get("provider", "mock"),
        rate_policy=None if policy is None else RateLimitPolicy(**policy),
        available=bool(record.get("available", True)),
        note=record.get("note"),
    )


def seed_registry(seed_path: Path | None = None) -> ModelRegistry:
    """Registry loaded from the packaged seed file (or a custom one)."""
    if seed_path is not None:
        text = Path(seed_path).read_text(encoding="utf-8")
    else:
        text = resources.files("reviewlens.fixtures").joinpath("models.json").read_text("utf-8")
    registry = ModelRegistry()
    for record in json.loads(text):
        registry.register_model(_profile_from_record(record))
    return registry
