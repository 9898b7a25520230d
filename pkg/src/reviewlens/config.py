"""Service configuration.

Precedence, lowest to highest: built-in defaults, config file (JSON),
environment variables, explicit overrides (CLI flags). The config file
path itself comes from REVIEWLENS_CONFIG or a flag.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .registry import ModelRegistry

__all__ = ["ServiceConfig", "load_config", "validate_config", "ENV_PREFIX"]

ENV_PREFIX = "REVIEWLENS_"

_ENV_KEYS = {
    "HOST": "host",
    "PORT": "port",
    "DEFAULT_MODEL": "default_model_id",
    "DEFAULT_LANGUAGE": "default_language",
    "PROVIDER": "default_provider",
    "CACHE_DIR": "cache_dir",
    "CACHE_TTL_S": "cache_ttl_s",
    "RESULTS_DIR": "results_dir",
    "FIXTURE_ROOT": "fixture_root",
    "LIVE_LLM": "live_llm",
    "LIVE_SCRAPE": "live_scrape",
    "LIVE_SCRAPE_ACK": "live_scrape_ack",
    "TIMEOUT_S": "timeout_s",
}

_TRUTHY = {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8300
    default_model_id: str = "gemini-1.5-flash"
    default_language: str = "en"
    default_provider: str = "fixture"
    cache_dir: Path = Path(".reviewlens-cache")
    cache_ttl_s: float = 86400.0
    results_dir: Path = Path("results")
    fixture_root: Path | None = None
    live_llm: bool = False
    live_scrape: bool = False
    live_scrape_ack: str = ""
    timeout_s: float = 60.0
    # provider id -> environment variable holding its credential
    provider_credentials: dict = field(
        default_factory=lambda: {"arel": "AREL_API_TOKEN", "caprolok": "CAPROLOK_API_TOKEN"}
    )


def _coerce(name: str, raw: Any) -> Any:
    if name in ("port",):
        return int(raw)
    if name in ("cache_ttl_s", "timeout_s"):
        return float(raw)
    if name in ("cache_dir", "results_dir", "fixture_root"):
        return Path(raw) if raw is not None else None
    if name in ("live_llm", "live_scrape"):
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in _TRUTHY
    return raw


def load_config(
    config_file: Path | str | None = None,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> ServiceConfig:
    env = os.environ if env is None else env
    config = ServiceConfig()

    file_path = config_file or env.get(ENV_PREFIX + "CONFIG")
    if file_path:
        path = Path(file_path)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        known = {f.name for f in fields(ServiceConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        config = replace(config, **{k: _coerce(k, v) for k, v in data.items()})

    env_values = {}
    for suffix, name in _ENV_KEYS.items():
        raw = env.get(ENV_PREFIX + suffix)
        if raw is not None:
            env_values[name] = _coerce(name, raw)
    if env_values:
        config = replace(config, **env_values)

    if overrides:
        config = replace(config, **{k: _coerce(k, v) for k, v in overrides.items() if v is not None})

    if config.cache_ttl_s <= 0:
        raise ConfigError("cache TTL must be positive")
    return config


def validate_config(config: ServiceConfig, registry: ModelRegistry) -> None:
    """Checks that need the model registry (run at service wiring time)."""
    if config.default_model_id != "mock" and config.default_model_id not in registry:
        raise ConfigError(f"default model {config.default_model_id!r} is not in the registry")
