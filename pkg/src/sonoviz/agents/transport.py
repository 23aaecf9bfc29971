"""Chat transports: a live HTTP endpoint and a deterministic mock.

The mock resolves each request to `<agent>/<sha256-of-prompt>.txt` inside
the fixture directory, falling back to `<agent>/default.txt`, so tests
stay byte-deterministic without depending on exact prompt wording.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import Protocol

import requests

from sonoviz.agents.config import AgentConfig

SYSTEM_PROMPT = (
    "You are an agent inside a sound-visualization authoring engine. "
    "Follow the instructions in the message exactly."
)


class TransportError(Exception):
    """A request that failed or timed out; callers may retry once."""


class Transport(Protocol):
    def complete(self, agent: str, prompt: str) -> str: ...


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class LiveTransport:
    """POSTs a minimal chat-completion body (system + user, temperature 0)."""

    def __init__(self, config: AgentConfig):
        self.endpoint = config.endpoint
        self.model_id = config.model_id
        self.api_key_env = config.api_key_env
        self.timeout_s = config.request_timeout_ms / 1000.0

    def complete(self, agent: str, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {
            "model": self.model_id,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": SYSTEM_PROMPT},
                {"role": "user", "content": prompt},
            ],
        }
        try:
            response = requests.post(
                self.endpoint, json=body, headers=headers, timeout=self.timeout_s
            )
            response.raise_for_status()
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"{agent} request failed: {exc}") from exc


class MockTransport:
    """Replays canned responses keyed by the rendered prompt's SHA-256."""

    def __init__(self, fixture_dir: str):
        self.fixture_dir = Path(fixture_dir)
        self.calls: list[tuple[str, str]] = []  # (agent, prompt digest)

    def complete(self, agent: str, prompt: str) -> str:
        digest = prompt_digest(prompt)
        self.calls.append((agent, digest))
        exact = self.fixture_dir / agent / f"{digest}.txt"
        if exact.exists():
            return exact.read_text(encoding="utf-8")
        fallback = self.fixture_dir / agent / "default.txt"
        if fallback.exists():
            return fallback.read_text(encoding="utf-8")
        raise TransportError(
            f"no mock fixture for agent {agent!r} (looked for {exact.name} and default.txt)"
        )


def make_transport(config: AgentConfig) -> Transport:
    if config.mode == "live":
        return LiveTransport(config)
    return MockTransport(config.mock_fixture_dir)
