"""A whole session in the lab: WAV replay driving scripts, frames on a hub.

Builds a one-second 440 Hz WAV, installs the volume-bar script, and runs
the full scheduler in virtual time (no sleeping, perfectly reproducible).
Prints the broadcast traffic summary and a couple of frame payloads.
"""

import asyncio
import json
import tempfile
from collections import Counter
from pathlib import Path

import numpy as np

from sonoviz.agents.registry import ScriptRecord, ScriptRegistry, registry_save
from sonoviz.audio.features import synth_tone
from sonoviz.audio.wavio import write_wav
from sonoviz.hub.server import StreamHub
from sonoviz.hub.wire import encode_message
from sonoviz.session.config import AudioSourceConfig, SessionConfig
from sonoviz.session.runtime import Session


class RecordingHub(StreamHub):
    def __init__(self):
        super().__init__()
        self.messages = []

    def broadcast(self, msg):
        self.messages.append(msg)
        super().broadcast(msg)


bar_source = (Path(__file__).parent.parent / "fixtures" / "scripts" / "volume_bar.ssc").read_text()

with tempfile.TemporaryDirectory() as tmp:
    wav_path = Path(tmp) / "tone.wav"
    signal = np.concatenate([c.samples for c in synth_tone([(440, 1.0)], 1000)])
    write_wav(wav_path, signal, 48000)

    registry_path = Path(tmp) / "scripts.json"
    registry_save(registry_path, ScriptRegistry([ScriptRecord("Volume Bar", bar_source, True)]))

    hub = RecordingHub()
    session = Session(
        SessionConfig(
            audio=AudioSourceConfig(kind="wav", wav_path=str(wav_path)),
            registry_path=str(registry_path),
        ),
        hub=hub,
    )
    asyncio.run(session.run(realtime=False))

print("broadcast traffic for 1 s of replay:", dict(Counter(m["type"] for m in hub.messages)))
frames = [m for m in hub.messages if m["type"] == "frame"]
print(f"\nfirst frame ({frames[0]['t_ms']:.0f} ms):")
print(json.dumps(frames[0], indent=2)[:400], "...")
print(f"\nlast frame fill width converged to "
      f"{frames[-1]['scripts'][0]['commands'][1]['width']:.3f} scene units")
print("\none wire payload, as a client sees it:")
print(encode_message(frames[-1])[:200], "...")
