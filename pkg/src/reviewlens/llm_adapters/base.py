from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from ..gateway import CompletionRequest
    from ..registry import ModelProfile


@dataclass(frozen=True)
class AdapterResult:
    text: str
    raw_id: str
    input_tokens: int | None = None
    output_tokens: int | None = None


class CompletionAdapter(Protocol):
    """One file per provider; adding a provider means one new adapter file
    plus its registry rows."""

    name: str

    def complete(
        self, request: "CompletionRequest", profile: "ModelProfile", timeout_s: float
    ) -> AdapterResult: ...
