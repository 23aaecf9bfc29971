"""Three-agent authoring pipeline: enhance, generate, check-and-repair."""

from sonoviz.agents.config import AgentConfig
from sonoviz.agents.pipeline import (
    AuthoringContext,
    AuthoringResult,
    Pipeline,
    TranscriptEntry,
    author,
    strip_code_fences,
)
from sonoviz.agents.registry import (
    RegistryError,
    ScriptRecord,
    ScriptRegistry,
    registry_load,
    registry_save,
)
from sonoviz.agents.transport import (
    LiveTransport,
    MockTransport,
    Transport,
    TransportError,
    make_transport,
)

__all__ = [
    "AgentConfig",
    "AuthoringContext",
    "AuthoringResult",
    "LiveTransport",
    "MockTransport",
    "Pipeline",
    "RegistryError",
    "ScriptRecord",
    "ScriptRegistry",
    "TranscriptEntry",
    "Transport",
    "TransportError",
    "author",
    "make_transport",
    "registry_load",
    "registry_save",
    "strip_code_fences",
]
