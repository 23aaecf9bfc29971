"""Orchestration: clocks, running scripts, authoring, and the serve loop."""

from sonoviz.session.config import AudioSourceConfig, SessionConfig, load_config_file
from sonoviz.session.runtime import RunningScript, Session

__all__ = [
    "AudioSourceConfig",
    "RunningScript",
    "Session",
    "SessionConfig",
    "load_config_file",
]
