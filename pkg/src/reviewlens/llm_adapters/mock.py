"""Deterministic stand-in LLM.

The response text embeds diagnostics of the prompt it received: a stable
hash, the number of review blocks detected in the context, and the
requested language code. End-to-end tests assert against those markers
without any network. Per-model injected delays (spent on the adapter's
clock) simulate provider latency; a delay past the timeout raises the same
timeout error a live adapter would.
"""

from __future__ import annotations

import hashlib
import re
from typing import TYPE_CHECKING, Mapping

from ..clocks import Clock, SYSTEM_CLOCK
from ..errors import CompletionTimeout
from .base import AdapterResult

if TYPE_CHECKING:
    from ..gateway import CompletionRequest
    from ..registry import ModelProfile

# Review blocks start with a "[date] score" header line.
BLOCK_RE = re.compile(r"^\[\d{4}-\d{2}-\d{2}\] score ", re.MULTILINE)
LANGUAGE_RE = re.compile(r"^Language:\s*(\S+)", re.MULTILINE)


class MockAdapter:
    name = "mock"

    def __init__(
        self,
        clock: Clock = SYSTEM_CLOCK,
        delays: Mapping[str, float] | None = None,
        default_delay: float = 0.0,
    ):
        self.clock = clock
        self.delays = dict(delays or {})
        self.default_delay = default_delay

    def complete(self, request: "CompletionRequest", profile: "ModelProfile", timeout_s: float) -> AdapterResult:
        delay = self.delays.get(profile.model_id, self.default_delay)
        if delay > timeout_s:
            self.clock.sleep(timeout_s)
            raise CompletionTimeout(f"mock completion for {profile.model_id} exceeded {timeout_s}s")
        if delay > 0:
            self.clock.sleep(delay)

        prompt = request.system_text + "\x00" + request.user_text
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:12]
        blocks = len(BLOCK_RE.findall(request.user_text))
        match = LANGUAGE_RE.search(request.system_text) or LANGUAGE_RE.search(request.user_text)
        language = match.group(1) if match else "unknown"
        text = f"mock-completion digest={digest} blocks={blocks} language={language}"
        return AdapterResult(text=text, raw_id=f"mock-{digest}")
