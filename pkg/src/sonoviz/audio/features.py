"""Sound feature extraction over 100 ms chunks.

The pipeline mirrors a live analyzer: stereo input is averaged to mono,
cut into non-overlapping 100 ms chunks, Hann-windowed, transformed with a
real FFT, and reduced to the dominant in-band frequency plus a 0-10
log-scaled value and the chunk RMS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

CHUNK_MS = 100

# Peak magnitude per sample below which a chunk counts as silent.  Applied
# to max|rfft| / n so the threshold does not depend on chunk length.
SILENCE_EPS = 1e-6


@dataclass(frozen=True)
class BandLimits:
    """Analysis band; dominant frequencies are only reported inside it."""

    low_hz: float = 20.0
    high_hz: float = 8000.0

    def __post_init__(self):
        if not 0 < self.low_hz < self.high_hz:
            raise ValueError(f"invalid band [{self.low_hz}, {self.high_hz}]")


@dataclass(frozen=True)
class AudioChunk:
    """One mono chunk of samples. Canonical chunks hold 100 ms of audio
    (sample_rate_hz / 10 samples), but any non-empty length is analyzable."""

    samples: np.ndarray
    sample_rate_hz: int
    seq: int = 0
    timestamp_ms: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("chunk must be a non-empty 1-D sample array")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if not np.all(np.isfinite(samples)):
            raise ValueError("chunk contains non-finite samples")


@dataclass(frozen=True)
class SpectrumFrame:
    """Non-negative-frequency magnitudes of one windowed chunk.

    Bin k sits at k * bin_resolution_hz.  n_samples is the transform
    length, kept so downstream thresholds can scale per sample.
    """

    bin_resolution_hz: float
    magnitudes: np.ndarray
    n_samples: int

    def frequency_of_bin(self, k: int) -> float:
        return k * self.bin_resolution_hz


@dataclass(frozen=True)
class SoundFeatures:
    """One 100 ms analysis result."""

    dominant_freq_hz: Optional[float]
    normalized: float
    rms: float
    seq: int = 0
    timestamp_ms: float = 0.0


def to_mono(left: Sequence[float], right: Sequence[float]) -> np.ndarray:
    """Average two channels sample-by-sample."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if left.shape != right.shape:
        raise ValueError(f"channel length mismatch: {left.shape} vs {right.shape}")
    return (left + right) / 2.0


def hann_window(n: int) -> np.ndarray:
    """Symmetric Hann window: w[i] = 0.5 * (1 - cos(2*pi*i / (n-1)))."""
    if n < 2:
        raise ValueError("window length must be >= 2")
    return np.hanning(n)


def magnitude_spectrum(chunk: AudioChunk) -> SpectrumFrame:
    """Window the chunk and take real-FFT magnitudes at the exact chunk
    length (no zero padding, preserving sample_rate / n bin spacing)."""
    n = len(chunk.samples)
    if n >= 2:
        windowed = chunk.samples * hann_window(n)
    else:
        windowed = chunk.samples
    mags = np.abs(np.fft.rfft(windowed))
    return SpectrumFrame(
        bin_resolution_hz=chunk.sample_rate_hz / n,
        magnitudes=mags,
        n_samples=n,
    )


def dominant_frequency(
    spectrum: SpectrumFrame, band: BandLimits = BandLimits()
) -> Optional[float]:
    """Frequency of the peak-magnitude bin inside the band, or None for a
    silent chunk.

    The low edge is exclusive: a strong tone just below the band leaks
    (via the window) into the exact edge bin, and an inclusive edge would
    let that leakage beat genuine in-band content.  Ties break toward the
    lower frequency.
    """
    res = spectrum.bin_resolution_hz
    freqs = np.arange(len(spectrum.magnitudes)) * res
    in_band = (freqs > band.low_hz) & (freqs <= band.high_hz)
    if not np.any(in_band):
        return None
    band_mags = np.where(in_band, spectrum.magnitudes, -1.0)
    k = int(np.argmax(band_mags))  # argmax takes the first max: lowest bin
    if band_mags[k] / spectrum.n_samples < SILENCE_EPS:
        return None
    return float(k * res)


def normalize_frequency(f: float, band: BandLimits = BandLimits()) -> float:
    """Map a frequency onto 0-10 logarithmically: the band edges land on
    exactly 0 and 10, out-of-band values clamp."""
    if f <= 0:
        raise ValueError("frequency must be positive")
    n = 10.0 * math.log(f / band.low_hz) / math.log(band.high_hz / band.low_hz)
    return min(10.0, max(0.0, n))


def extract_features(chunk: AudioChunk, band: BandLimits = BandLimits()) -> SoundFeatures:
    """Full per-chunk pipeline: spectrum -> dominant -> normalized, plus RMS."""
    spectrum = magnitude_spectrum(chunk)
    dominant = dominant_frequency(spectrum, band)
    normalized = normalize_frequency(dominant, band) if dominant is not None else 0.0
    rms = float(np.sqrt(np.mean(chunk.samples**2)))
    return SoundFeatures(
        dominant_freq_hz=dominant,
        normalized=normalized,
        rms=rms,
        seq=chunk.seq,
        timestamp_ms=chunk.timestamp_ms,
    )


def synth_tone(
    tones: Sequence[tuple[float, float]],
    duration_ms: float,
    sample_rate_hz: int = 48000,
) -> list[AudioChunk]:
    """Generate a sum of sines split into 100 ms chunks.

    `tones` is a list of (frequency_hz, amplitude) pairs whose amplitudes
    must sum to at most 1 so the signal stays inside [-1, 1].  Phase is
    continuous across chunk boundaries.
    """
    total_amp = sum(a for _, a in tones)
    if total_amp > 1.0 + 1e-12:
        raise ValueError(f"amplitudes sum to {total_amp}, must be <= 1")
    chunk_len = max(1, round(sample_rate_hz / 10))
    n_chunks = int(duration_ms // CHUNK_MS)
    total = n_chunks * chunk_len
    t = np.arange(total) / sample_rate_hz
    signal = np.zeros(total)
    for freq, amp in tones:
        signal += amp * np.sin(2 * np.pi * freq * t)
    return [
        AudioChunk(
            samples=signal[i * chunk_len : (i + 1) * chunk_len],
            sample_rate_hz=sample_rate_hz,
            seq=i,
            timestamp_ms=i * CHUNK_MS,
        )
        for i in range(n_chunks)
    ]
