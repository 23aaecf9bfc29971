from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from sonoviz.audio.features import AudioChunk, synth_tone
from sonoviz.audio.wavio import write_wav

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def volume_bar_source() -> str:
    return (FIXTURES / "scripts" / "volume_bar.ssc").read_text(encoding="utf-8")


@pytest.fixture
def make_tone_wav(tmp_path):
    """Factory writing a synthesized tone mix to a temp WAV file."""

    def _make(tones, duration_ms, sample_rate_hz=48000, name="tone.wav"):
        chunks = synth_tone(tones, duration_ms, sample_rate_hz)
        signal = np.concatenate([c.samples for c in chunks]) if chunks else np.zeros(0)
        path = tmp_path / name
        write_wav(path, signal, sample_rate_hz)
        return path

    return _make


def tone_chunk(freq_amp_pairs, sample_rate_hz=48000, n=None, offset=0, seq=0) -> AudioChunk:
    """Build one chunk of a sine mixture directly (no amplitude-sum limit)."""
    if n is None:
        n = sample_rate_hz // 10
    t = (np.arange(n) + offset) / sample_rate_hz
    signal = np.zeros(n)
    for freq, amp in freq_amp_pairs:
        signal = signal + amp * np.sin(2 * np.pi * freq * t)
    return AudioChunk(
        samples=signal,
        sample_rate_hz=sample_rate_hz,
        seq=seq,
        timestamp_ms=seq * 100,
    )


def hann_closed_form(n: int) -> np.ndarray:
    """Independent Hann evaluation used by oracles (not numpy's)."""
    i = np.arange(n)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * i / (n - 1)))


def naive_dft_magnitudes(samples: np.ndarray) -> np.ndarray:
    """O(N^2) non-negative-frequency DFT magnitudes: one explicit
    correlation sum per bin, no FFT anywhere."""
    n = len(samples)
    bins = n // 2 + 1
    out = np.empty(bins)
    idx = np.arange(n)
    for k in range(bins):
        phase = np.exp(-2j * np.pi * k * idx / n)
        out[k] = np.abs(np.sum(samples * phase))
    return out
