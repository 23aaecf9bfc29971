"""Session configuration: audio source, clocks, registry, agents.

An optional key=value config file mirrors the CLI flags; explicit flags
always win over file values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from sonoviz.agents.config import AgentConfig

DEFAULT_PORT = 8765
DEFAULT_TICK_RATE_HZ = 50.0
DEFAULT_FRAME_RATE_HZ = 30.0
DEFAULT_STEP_BUDGET = 200_000


@dataclass(frozen=True)
class AudioSourceConfig:
    """Where chunks come from: a WAV file, synthesized tones, or a mic."""

    kind: str = "synth"  # "wav" | "synth" | "live"
    wav_path: Optional[str] = None
    loop: bool = False
    tones: tuple[tuple[float, float], ...] = ((440.0, 1.0),)
    sample_rate_hz: int = 48000

    def __post_init__(self):
        if self.kind not in ("wav", "synth", "live"):
            raise ValueError(f"unknown audio source {self.kind!r}")
        if self.kind == "wav" and not self.wav_path:
            raise ValueError("wav source needs a path")


@dataclass(frozen=True)
class SessionConfig:
    audio: AudioSourceConfig = field(default_factory=AudioSourceConfig)
    port: int = DEFAULT_PORT
    registry_path: str = "scripts.json"
    agent: Optional[AgentConfig] = None
    tick_rate_hz: float = DEFAULT_TICK_RATE_HZ
    frame_rate_hz: float = DEFAULT_FRAME_RATE_HZ
    step_budget: int = DEFAULT_STEP_BUDGET
    static_dir: Optional[str] = None

    def __post_init__(self):
        if self.tick_rate_hz <= 0 or self.frame_rate_hz <= 0:
            raise ValueError("clock rates must be positive")
        if self.tick_rate_hz < self.frame_rate_hz:
            raise ValueError("tick rate must be at least the frame rate")
        if self.step_budget <= 0:
            raise ValueError("step budget must be positive")


def parse_tone_spec(spec: str) -> tuple[tuple[float, float], ...]:
    """Parse "440:1.0,880:0.25" into ((440.0, 1.0), (880.0, 0.25))."""
    tones = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        freq, _, amp = part.partition(":")
        tones.append((float(freq), float(amp) if amp else 1.0))
    if not tones:
        raise ValueError(f"empty tone spec {spec!r}")
    return tuple(tones)


def load_config_file(path: str | Path) -> dict[str, str]:
    """Read a key=value config file ('#' starts a comment)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, found {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values
