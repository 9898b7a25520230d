"""Wire adapter for the Anthropic messages REST API (ANTHROPIC_API_KEY)."""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

import httpx

from ..errors import CompletionTimeout, ProviderError
from .base import AdapterResult

if TYPE_CHECKING:
    from ..gateway import CompletionRequest
    from ..registry import ModelProfile

_ENDPOINT = "https://api.anthropic.com/v1/messages"


class AnthropicAdapter:
    name = "anthropic"

    def __init__(self, api_key_env: str = "ANTHROPIC_API_KEY", endpoint: str = _ENDPOINT):
        self.api_key_env = api_key_env
        self.endpoint = endpoint

    def complete(self, request: "CompletionRequest", profile: "ModelProfile", timeout_s: float) -> AdapterResult:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise ProviderError(f"{self.api_key_env} is not set", retriable=False)
        payload = {
            "model": profile.model_id,
            "system": request.system_text,
            "messages": [{"role": "user", "content": request.user_text}],
            "max_tokens": request.max_output_tokens,
            "temperature": request.temperature,
        }
        try:
            response = httpx.post(
                self.endpoint,
                json=payload,
                headers={"x-api-key": api_key, "anthropic-version": "2023-06-01"},
                timeout=timeout_s,
            )
        except httpx.TimeoutException as exc:
            raise CompletionTimeout(f"anthropic call exceeded {timeout_s}s") from exc
        except httpx.HTTPError as exc:
            raise ProviderError(str(exc), retriable=True) from exc
        if response.status_code != 200:
            raise ProviderError(
                f"anthropic returned {response.status_code}",
                status=response.status_code,
                retriable=response.status_code in (429,) or response.status_code >= 500,
            )
        body = response.json()
        usage = body.get("usage", {})
        return AdapterResult(
            text="".join(part.get("text", "") for part in body.get("content", [])),
            raw_id=body.get("id", ""),
            input_tokens=usage.get("input_tokens"),
            output_tokens=usage.get("output_tokens"),
        )
