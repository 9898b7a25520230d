"""Wire adapter for the Google generative language REST API (GEMINI_API_KEY)."""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

import httpx

from ..errors import CompletionTimeout, ProviderError
from .base import AdapterResult

if TYPE_CHECKING:
    from ..gateway import CompletionRequest
    from ..registry import ModelProfile

_ENDPOINT = "https://generativelanguage.googleapis.com/v1beta/models/{model}:generateContent"


class GoogleAdapter:
    name = "google"

    def __init__(self, api_key_env: str = "GEMINI_API_KEY", endpoint: str = _ENDPOINT):
        self.api_key_env = api_key_env
        self.endpoint = endpoint

    def complete(self, request: "CompletionRequest", profile: "ModelProfile", timeout_s: float) -> AdapterResult:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise ProviderError(f"{self.api_key_env} is not set", retriable=False)
        payload = {
            "system_instruction": {"parts": [{"text": request.system_text}]},
            "contents": [{"role": "user", "parts": [{"text": request.user_text}]}],
            "generationConfig": {
                "maxOutputTokens": request.max_output_tokens,
                "temperature": request.temperature,
            },
        }
        url = self.endpoint.format(model=profile.model_id)
        try:
            response = httpx.post(url, json=payload, params={"key": api_key}, timeout=timeout_s)
        except httpx.TimeoutException as exc:
            raise CompletionTimeout(f"google call exceeded {timeout_s}s") from exc
        except httpx.HTTPError as exc:
            raise ProviderError(str(exc), retriable=True) from exc
        if response.status_code != 200:
            raise ProviderError(
                f"google returned {response.status_code}",
                status=response.status_code,
                retriable=response.status_code in (429,) or response.status_code >= 500,
            )
        body = response.json()
        candidates = body.get("candidates", [])
        text = ""
        if candidates:
            text = "".join(
                part.get("text", "") for part in candidates[0].get("content", {}).get("parts", [])
            )
        usage = body.get("usageMetadata", {})
        return AdapterResult(
            text=text,
            raw_id=body.get("modelVersion", ""),
            input_tokens=usage.get("promptTokenCount"),
            output_tokens=usage.get("candidatesTokenCount"),
        )
