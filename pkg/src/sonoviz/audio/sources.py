"""Chunk producers: WAV replay, synthesized tones, and live capture.

Every source yields AudioChunk values with monotonically increasing seq
and 100 ms timestamps.  Live capture needs the optional `sounddevice`
package and real hardware; tests and CI only ever use replay and synth.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Iterator, Optional, Sequence

import numpy as np

from sonoviz.audio.features import CHUNK_MS, AudioChunk, synth_tone
from sonoviz.audio.wavio import read_wav


def chunk_signal(samples: np.ndarray, sample_rate_hz: int) -> Iterator[AudioChunk]:
    """Cut a signal into non-overlapping 100 ms chunks, dropping any
    partial tail (a D-ms signal yields exactly floor(D/100) chunks)."""
    chunk_len = max(1, round(sample_rate_hz / 10))
    n_chunks = len(samples) // chunk_len
    for i in range(n_chunks):
        yield AudioChunk(
            samples=samples[i * chunk_len : (i + 1) * chunk_len],
            sample_rate_hz=sample_rate_hz,
            seq=i,
            timestamp_ms=i * CHUNK_MS,
        )


def replay_wav(path: str, loop: bool = False) -> Iterator[AudioChunk]:
    """Yield chunks from a WAV file, optionally looping forever.  Looped
    replay keeps seq/timestamps increasing across passes."""
    samples, rate = read_wav(path)
    base = list(chunk_signal(samples, rate))
    if not base:
        return
    seq = 0
    while True:
        for chunk in base:
            yield AudioChunk(
                samples=chunk.samples,
                sample_rate_hz=rate,
                seq=seq,
                timestamp_ms=seq * CHUNK_MS,
            )
            seq += 1
        if not loop:
            return


def synth_chunks(
    tones: Sequence[tuple[float, float]],
    sample_rate_hz: int = 48000,
    duration_ms: Optional[float] = None,
) -> Iterator[AudioChunk]:
    """Yield synthesized tone chunks; endless when duration_ms is None."""
    if duration_ms is not None:
        yield from synth_tone(tones, duration_ms, sample_rate_hz)
        return
    # One second at a time, re-stamped to a continuous stream.  Tone phase
    # restarts each second; at integer frequencies the seam is inaudible
    # and the spectrum is unaffected.
    seq = 0
    while True:
        for chunk in synth_tone(tones, 1000, sample_rate_hz):
            yield AudioChunk(
                samples=chunk.samples,
                sample_rate_hz=sample_rate_hz,
                seq=seq,
                timestamp_ms=seq * CHUNK_MS,
            )
            seq += 1


class ChunkQueue:
    """Bounded producer/consumer handoff for chunks.

    Capacity 8; when full the oldest chunk is dropped and counted, so a
    stalled consumer can never block the capture thread.
    """

    def __init__(self, capacity: int = 8):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.dropped = 0
        self._items: deque[AudioChunk] = deque()
        self._lock = threading.Lock()
        self._ready = threading.Condition(self._lock)
        self._closed = False

    def put(self, chunk: AudioChunk) -> None:
        with self._ready:
            if len(self._items) >= self.capacity:
                self._items.popleft()
                self.dropped += 1
            self._items.append(chunk)
            self._ready.notify()

    def get(self, timeout: Optional[float] = None) -> Optional[AudioChunk]:
        """Next chunk, or None once the queue is closed and drained (or on
        timeout)."""
        with self._ready:
            while not self._items and not self._closed:
                if not self._ready.wait(timeout):
                    return None
            if self._items:
                return self._items.popleft()
            return None

    def close(self) -> None:
        with self._ready:
            self._closed = True
            self._ready.notify_all()

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


def live_capture(sample_rate_hz: int = 48000, device=None) -> Iterator[AudioChunk]:
    """Capture microphone audio in 100 ms chunks (requires sounddevice).

    Runs the device callback as the producer side of a ChunkQueue, so slow
    consumers lose old chunks instead of stalling capture.
    """
    try:
        import sounddevice
    except ImportError as exc:  # pragma: no cover - hardware path
        raise RuntimeError(
            "live capture needs the optional 'sounddevice' package"
        ) from exc

    queue = ChunkQueue()
    chunk_len = max(1, round(sample_rate_hz / 10))
    state = {"seq": 0}

    def on_block(indata, frames, time_info, status):  # pragma: no cover
        mono = np.mean(indata, axis=1) if indata.ndim == 2 else indata
        queue.put(
            AudioChunk(
                samples=mono.astype(np.float64),
                sample_rate_hz=sample_rate_hz,
                seq=state["seq"],
                timestamp_ms=state["seq"] * CHUNK_MS,
            )
        )
        state["seq"] += 1

    stream = sounddevice.InputStream(  # pragma: no cover
        samplerate=sample_rate_hz,
        blocksize=chunk_len,
        channels=1,
        callback=on_block,
        device=device,
    )
    with stream:  # pragma: no cover
        while True:
            chunk = queue.get(timeout=1.0)
            if chunk is not None:
                yield chunk
