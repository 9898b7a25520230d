from .base import AdapterResult, CompletionAdapter
from .mock import MockAdapter

__all__ = ["AdapterResult", "CompletionAdapter", "MockAdapter", "default_adapters"]


def default_adapters(clock=None, mock_delays=None) -> dict:
    """Adapter set for a gateway: the deterministic mock plus the wire
    adapters (used only when live dispatch is enabled)."""
    from ..clocks import SYSTEM_CLOCK
    from .anthropic_api import AnthropicAdapter
    from .google_api import GoogleAdapter
    from .openai_api import OpenAiAdapter

    clock = clock or SYSTEM_CLOCK
    return {
        "mock": MockAdapter(clock=clock, delays=mock_delays),
        "openai": OpenAiAdapter(),
        "anthropic": AnthropicAdapter(),
        "google": GoogleAdapter(),
    }
