"""Agent pipeline configuration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

DEFAULT_API_KEY_ENV = "SONO_API_KEY"


@dataclass(frozen=True)
class AgentConfig:
    """How to reach the model: a live chat-completion endpoint or a
    directory of canned mock replies."""

    mode: str = "mock"  # "live" | "mock"
    endpoint: Optional[str] = None
    model_id: Optional[str] = None
    api_key_env: str = DEFAULT_API_KEY_ENV
    mock_fixture_dir: Optional[str] = None
    max_repair_iterations: int = 3
    request_timeout_ms: int = 60_000

    def __post_init__(self):
        if self.mode not in ("live", "mock"):
            raise ValueError(f"unknown agent mode {self.mode!r}")
        if self.mode == "live" and not (self.endpoint and self.model_id):
            raise ValueError("live mode requires endpoint and model_id")
        if self.mode == "mock" and not self.mock_fixture_dir:
            raise ValueError("mock mode requires mock_fixture_dir")
        if self.max_repair_iterations < 0:
            raise ValueError("max_repair_iterations must be >= 0")
        if self.request_timeout_ms <= 0:
            raise ValueError("request_timeout_ms must be positive")
