"""Audio capture, chunking, and per-chunk sound feature extraction."""

from sonoviz.audio.features import (
    AudioChunk,
    BandLimits,
    SoundFeatures,
    SpectrumFrame,
    dominant_frequency,
    extract_features,
    hann_window,
    magnitude_spectrum,
    normalize_frequency,
    synth_tone,
    to_mono,
)
from sonoviz.audio.sources import ChunkQueue, chunk_signal, replay_wav, synth_chunks
from sonoviz.audio.wavio import read_wav, write_wav

__all__ = [
    "AudioChunk",
    "BandLimits",
    "SoundFeatures",
    "SpectrumFrame",
    "ChunkQueue",
    "chunk_signal",
    "dominant_frequency",
    "extract_features",
    "hann_window",
    "magnitude_spectrum",
    "normalize_frequency",
    "read_wav",
    "replay_wav",
    "synth_chunks",
    "synth_tone",
    "to_mono",
    "write_wav",
]
