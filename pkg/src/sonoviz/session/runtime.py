"""The session scheduler.

A single simulated timeline drives all three clocks: sound features as
each 100 ms chunk completes, fixed updates at the tick rate, and frame
emission at the frame rate.  Events at equal timestamps fire in the
order feature -> tick -> frame, which makes a replay run a pure function
of its inputs: the same WAV and registry always yield the identical
frame stream.  In realtime mode the same loop simply paces itself
against the wall clock.

Authoring runs in a worker thread (agent calls block on the network) and
hands finished scripts back to the scheduler, which swaps them in between
time steps so no script ever observes a half-applied replacement.
"""

from __future__ import annotations

import asyncio
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from sonoviz.agents.pipeline import Pipeline
from sonoviz.agents.registry import ScriptRecord, registry_load, registry_save
from sonoviz.audio.features import CHUNK_MS, AudioChunk, BandLimits, extract_features
from sonoviz.audio.sources import live_capture, replay_wav, synth_chunks
from sonoviz.hub.server import StreamHub
from sonoviz.hub.wire import (
    author_status_message,
    diagnostics_message,
    features_message,
    frame_message,
    script_list_message,
)
from sonoviz.script.compiler import CompiledScript, ScriptSource, compile_script
from sonoviz.script.interpreter import (
    ScriptInitError,
    ScriptInstance,
    dispatch_sound,
    instantiate,
    render,
    tick,
)
from sonoviz.session.config import SessionConfig

UNKNOWN_CLASSIFICATION = "unknown"
DEFAULT_DISTANCE = 1.0


@dataclass
class RunningScript:
    record: ScriptRecord
    instance: ScriptInstance


def make_source(config: SessionConfig) -> Iterator[AudioChunk]:
    audio = config.audio
    if audio.kind == "wav":
        return replay_wav(audio.wav_path, loop=audio.loop)
    if audio.kind == "synth":
        return synth_chunks(audio.tones, audio.sample_rate_hz)
    return live_capture(audio.sample_rate_hz)


class Session:
    """Owns the registry, the running script instances, and the clocks."""

    def __init__(
        self,
        config: SessionConfig,
        hub: Optional[StreamHub] = None,
        transport=None,
    ):
        self.config = config
        self.registry = registry_load(config.registry_path)
        self.hub = hub if hub is not None else StreamHub()
        self.hub.control = self
        self.running: dict[str, RunningScript] = {}
        self.frame_seq = 0
        self.sim_ms = 0.0
        self.authoring_busy = False
        self.band = BandLimits()
        self._pending_swaps: list[tuple[ScriptRecord, CompiledScript]] = []
        self._stop = False
        self._last_authoring: Optional[tuple[str, ScriptSource]] = None
        self._pipeline: Optional[Pipeline] = None
        if config.agent is not None:
            self._pipeline = Pipeline(config.agent, transport=transport)
        self.counts = {"features": 0, "ticks": 0, "frames": 0}
        self.load_registry_scripts()

    # -- script lifecycle -------------------------------------------------

    def load_registry_scripts(self) -> None:
        """(Re)build instances for every registry record that compiles."""
        for record in self.registry:
            self._install(record)

    def _install(self, record: ScriptRecord) -> None:
        result = compile_script(ScriptSource(text=record.scriptContent, origin="file"))
        if not result.ok:
            self.hub.broadcast(
                diagnostics_message(result.errors, title=record.userPrompt)
            )
            return
        try:
            instance = instantiate(result.script, self.config.step_budget)
        except ScriptInitError as exc:
            self.hub.broadcast(
                diagnostics_message([exc.diagnostic], title=record.userPrompt)
            )
            return
        self.running[record.userPrompt.casefold()] = RunningScript(
            record=record, instance=instance
        )

    def _apply_pending_swaps(self) -> None:
        while self._pending_swaps:
            record, compiled = self._pending_swaps.pop(0)
            try:
                instance = instantiate(compiled, self.config.step_budget)
            except ScriptInitError as exc:
                self.hub.broadcast(
                    diagnostics_message([exc.diagnostic], title=record.userPrompt)
                )
                continue
            self.running[record.userPrompt.casefold()] = RunningScript(
                record=record, instance=instance
            )

    # -- SessionControl (hub commands) -------------------------------------

    def start_authoring(self, prompt: str) -> bool:
        if self.authoring_busy or self._pipeline is None:
            return False
        self.authoring_busy = True
        asyncio.get_running_loop().create_task(self._author_task(prompt))
        return True

    async def _author_task(self, prompt: str) -> None:
        loop = asyncio.get_running_loop()

        def on_status(phase: str, detail: str) -> None:
            loop.call_soon_threadsafe(
                self.hub.broadcast, author_status_message(phase, detail)
            )

        try:
            result = await asyncio.to_thread(
                self._pipeline.author,
                prompt,
                self.registry,
                registry_path=self.config.registry_path,
                previous=self._last_authoring,
                on_status=on_status,
            )
            if result.succeeded:
                record = self.registry.lookup(prompt)
                self._pending_swaps.append((record, result.script))
                self._last_authoring = (prompt, result.source)
                self.hub.broadcast(script_list_message(self.registry.records))
            elif result.last_diagnostics:
                self.hub.broadcast(
                    diagnostics_message(list(result.last_diagnostics), title=prompt)
                )
        finally:
            self.authoring_busy = False

    def set_draw_ui(self, title: str, value: bool) -> bool:
        if not self.registry.set_draw_ui(title, value):
            return False
        registry_save(self.config.registry_path, self.registry)
        self.hub.broadcast(script_list_message(self.registry.records))
        return True

    def list_records(self) -> list:
        return list(self.registry.records)

    # -- event processing ---------------------------------------------------

    def process_feature(self, chunk: AudioChunk) -> None:
        features = extract_features(chunk, self.band)
        self.counts["features"] += 1
        self.hub.broadcast(features_message(features))
        for rs in self.running.values():
            diag = dispatch_sound(
                rs.instance,
                UNKNOWN_CLASSIFICATION,
                features.normalized,
                DEFAULT_DISTANCE,
            )
            if diag is not None:
                self.hub.broadcast(diagnostics_message([diag], title=rs.record.userPrompt))

    def process_tick(self, dt: float) -> None:
        self.counts["ticks"] += 1
        for rs in self.running.values():
            diag = tick(rs.instance, dt)
            if diag is not None:
                self.hub.broadcast(diagnostics_message([diag], title=rs.record.userPrompt))

    def process_frame(self, t_ms: float) -> None:
        self.frame_seq += 1
        self.counts["frames"] += 1
        entries = []
        for rs in self.running.values():
            record = self.registry.lookup(rs.record.userPrompt)
            should_draw = record.drawUI if record is not None else True
            if not should_draw:
                continue
            commands, diag = render(rs.instance, True)
            if diag is not None:
                self.hub.broadcast(diagnostics_message([diag], title=rs.record.userPrompt))
                continue
            entries.append((rs.record.userPrompt, commands))
        self.hub.broadcast(frame_message(self.frame_seq, t_ms, entries))

    # -- the main loop --------------------------------------------------------

    def stop(self) -> None:
        self._stop = True

    async def run(self, realtime: bool = True, max_sim_ms: Optional[float] = None) -> None:
        """Drive the clocks until the source is exhausted (replay), the
        simulated-time limit is hit, or stop() is called."""
        source = make_source(self.config)
        tick_rate = self.config.tick_rate_hz
        frame_rate = self.config.frame_rate_hz
        tick_dt = 1.0 / tick_rate

        next_chunk = next(source, None)
        stop_at: Optional[float] = None if next_chunk is not None else 0.0
        tick_count = 1
        frame_count = 1
        wall_start = time.monotonic()

        while not self._stop:
            chunk_due = (
                next_chunk.timestamp_ms + CHUNK_MS if next_chunk is not None else None
            )
            # single division keeps whole-second boundaries exact
            tick_due = tick_count * 1000.0 / tick_rate
            frame_due = frame_count * 1000.0 / frame_rate
            due = [tick_due, frame_due]
            if chunk_due is not None:
                due.append(chunk_due)
            t = min(due)

            if stop_at is not None and t > stop_at:
                break
            if max_sim_ms is not None and t > max_sim_ms:
                break

            if realtime:
                lag = t / 1000.0 - (time.monotonic() - wall_start)
                if lag > 0:
                    await asyncio.sleep(lag)
            else:
                # virtual mode: yield between steps so hub pumps and
                # command handlers can interleave deterministically
                await asyncio.sleep(0)

            self.sim_ms = t
            if self._pending_swaps:
                self._apply_pending_swaps()

            if chunk_due is not None and chunk_due == t:
                self.process_feature(next_chunk)
                next_chunk = next(source, None)
                if next_chunk is None:
                    stop_at = t
            if tick_due == t:
                self.process_tick(tick_dt)
                tick_count += 1
            if frame_due == t:
                self.process_frame(t)
                frame_count += 1


async def serve(config: SessionConfig) -> None:
    """Run the engine and its WebSocket/static endpoint on one port."""
    import uvicorn

    from sonoviz.hub.server import PING_INTERVAL_S, create_app

    session = Session(config)
    app = create_app(session.hub, static_dir=config.static_dir)
    server_config = uvicorn.Config(
        app,
        host="0.0.0.0",
        port=config.port,
        log_level="warning",
        ws_ping_interval=PING_INTERVAL_S,
        ws_ping_timeout=PING_INTERVAL_S,
    )
    server = uvicorn.Server(server_config)
    loop_task = asyncio.create_task(session.run(realtime=True))
    try:
        await server.serve()
    finally:
        session.stop()
        await asyncio.gather(loop_task, return_exceptions=True)
