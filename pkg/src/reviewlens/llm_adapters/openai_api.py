"""Wire adapter for the OpenAI chat completions REST API.

Requires OPENAI_API_KEY. Exercised only when live dispatch is enabled;
offline runs route through the mock adapter instead.
"""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

import httpx

from ..errors import CompletionTimeout, ProviderError
from .base import AdapterResult

if TYPE_CHECKING:
    from ..gateway import CompletionRequest
    from ..registry import ModelProfile

_ENDPOINT = "https://api.openai.com/v1/chat/completions"


class OpenAiAdapter:
    name = "openai"

    def __init__(self, api_key_env: str = "OPENAI_API_KEY", endpoint: str = _ENDPOINT):
        self.api_key_env = api_key_env
        self.endpoint = endpoint

    def complete(self, request: "CompletionRequest", profile: "ModelProfile", timeout_s: float) -> AdapterResult:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise ProviderError(f"{self.api_key_env} is not set", retriable=False)
        payload = {
            "model": profile.model_id,
            "messages": [
                {"role": "system", "content": request.system_text},
                {"role": "user", "content": request.user_text},
            ],
            "max_tokens": request.max_output_tokens,
            "temperature": request.temperature,
        }
        try:
            response = httpx.post(
                self.endpoint,
                json=payload,
                headers={"Authorization": f"Bearer {api_key}"},
                timeout=timeout_s,
            )
        except httpx.TimeoutException as exc:
            raise CompletionTimeout(f"openai call exceeded {timeout_s}s") from exc
        except httpx.HTTPError as exc:
            raise ProviderError(str(exc), retriable=True) from exc
        if response.status_code != 200:
            raise ProviderError(
                f"openai returned {response.status_code}",
                status=response.status_code,
                retriable=response.status_code in (429,) or response.status_code >= 500,
            )
        body = response.json()
        usage = body.get("usage", {})
        return AdapterResult(
            text=body["choices"][0]["message"]["content"],
            raw_id=body.get("id", ""),
            input_tokens=usage.get("prompt_tokens"),
            output_tokens=usage.get("completion_tokens"),
        )
