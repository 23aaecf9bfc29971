"""WAV file reading and writing.

Accepts PCM 16-bit and 32-bit float files, mono or stereo, at any sample
rate.  Stereo is averaged to mono on read; no resampling happens (chunk
length adapts to the file's rate instead).
"""

from __future__ import annotations

import numpy as np
from scipy.io import wavfile

from sonoviz.audio.features import to_mono


def read_wav(path: str) -> tuple[np.ndarray, int]:
    """Read a WAV file into (mono float64 samples in [-1, 1], sample rate)."""
    rate, data = wavfile.read(path)
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        samples = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise ValueError(f"unsupported WAV sample format: {data.dtype}")
    if samples.ndim == 2:
        if samples.shape[1] == 1:
            samples = samples[:, 0]
        elif samples.shape[1] == 2:
            samples = to_mono(samples[:, 0], samples[:, 1])
        else:
            raise ValueError(f"unsupported channel count: {samples.shape[1]}")
    return samples, int(rate)


def write_wav(path: str, samples: np.ndarray, sample_rate_hz: int) -> None:
    """Write mono float samples as a 32-bit float WAV."""
    wavfile.write(path, sample_rate_hz, np.asarray(samples, dtype=np.float32))
