import asyncio
import time

import pytest

from sonoviz.agents.config import AgentConfig
from sonoviz.agents.registry import ScriptRecord, ScriptRegistry, registry_load, registry_save
from sonoviz.hub.server import StreamHub
from sonoviz.hub.wire import encode_message
from sonoviz.session.config import AudioSourceConfig, SessionConfig
from sonoviz.session.runtime import Session

from conftest import FIXTURES

NORMALIZED_440 = 5.1590765981421525


class RecordingHub(StreamHub):
    def __init__(self):
        super().__init__()
        self.messages = []

    def broadcast(self, msg):
        self.messages.append(msg)
        super().broadcast(msg)

    def of_type(self, type_):
        return [m for m in self.messages if m["type"] == type_]


def write_registry(path, *records):
    registry_save(path, ScriptRegistry(list(records)))


def volume_bar_record(drawUI=True):
    content = (FIXTURES / "scripts" / "volume_bar.ssc").read_text(encoding="utf-8")
    return ScriptRecord(userPrompt="Volume Bar", scriptContent=content, drawUI=drawUI)


def spinner_record():
    content = (FIXTURES / "diagnostics" / "infinite_loop.ssc").read_text(encoding="utf-8")
    return ScriptRecord(userPrompt="Spinner", scriptContent=content, drawUI=True)


def make_session(tmp_path, records, wav=None, duration_ms=1000, make_tone_wav=None, **cfg):
    registry_path = tmp_path / "scripts.json"
    write_registry(registry_path, *records)
    if wav is None:
        wav = make_tone_wav([(440, 1.0)], duration_ms)
    hub = RecordingHub()
    config = SessionConfig(
        audio=AudioSourceConfig(kind="wav", wav_path=str(wav)),
        registry_path=str(registry_path),
        **cfg,
    )
    return Session(config, hub=hub), hub


class TestCadence:
    def test_deterministic_event_counts(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [volume_bar_record()], duration_ms=10_000, make_tone_wav=make_tone_wav
        )
        asyncio.run(session.run(realtime=False))
        assert session.counts == {"features": 100, "ticks": 500, "frames": 300}
        assert len(hub.of_type("features")) == 100
        assert len(hub.of_type("frame")) == 300

    def test_frame_seq_strictly_increasing(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [volume_bar_record()], make_tone_wav=make_tone_wav
        )
        asyncio.run(session.run(realtime=False))
        seqs = [m["frame_seq"] for m in hub.of_type("frame")]
        assert seqs == sorted(seqs) and len(set(seqs)) == len(seqs)

    def test_realtime_pacing(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [], duration_ms=1000, make_tone_wav=make_tone_wav
        )
        started = time.monotonic()
        asyncio.run(session.run(realtime=True))
        elapsed = time.monotonic() - started
        assert session.counts["features"] == 10
        assert session.counts["ticks"] == 50
        assert session.counts["frames"] == 30
        assert 0.9 <= elapsed <= 1.5


class TestReplayDeterminism:
    def test_identical_frame_streams(self, tmp_path, make_tone_wav):
        wav = make_tone_wav([(440, 0.6), (999, 0.2)], 1000)

        def run(subdir):
            path = tmp_path / subdir
            path.mkdir()
            session, hub = make_session(path, [volume_bar_record()], wav=wav)
            asyncio.run(session.run(realtime=False))
            return [encode_message(m) for m in hub.messages]

        assert run("a") == run("b")


class TestSoundWiring:
    def test_volume_bar_converges_to_normalized_level(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [volume_bar_record()], duration_ms=3000, make_tone_wav=make_tone_wav
        )
        asyncio.run(session.run(realtime=False))
        expected_target = NORMALIZED_440 / 10.0
        instance = session.running["volume bar"].instance
        assert instance.store["target"] == pytest.approx(expected_target, abs=1e-9)
        assert instance.store["fill"] == pytest.approx(expected_target, abs=0.01)
        last_frame = hub.of_type("frame")[-1]
        fill_rect = last_frame["scripts"][0]["commands"][1]
        assert fill_rect["width"] == pytest.approx(7.5 * expected_target, abs=0.1)

    def test_features_on_wire(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [], duration_ms=300, make_tone_wav=make_tone_wav
        )
        asyncio.run(session.run(realtime=False))
        features = hub.of_type("features")
        assert [f["seq"] for f in features] == [0, 1, 2]
        assert all(f["dominant_hz"] == 440.0 for f in features)


class TestDrawUiGating:
    def test_disabled_script_omitted_from_frames(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path,
            [volume_bar_record(drawUI=False)],
            duration_ms=300,
            make_tone_wav=make_tone_wav,
        )
        asyncio.run(session.run(realtime=False))
        for frame in hub.of_type("frame"):
            assert frame["scripts"] == []

    def test_toggle_removes_from_next_frame(self, tmp_path, make_tone_wav):
        wav = make_tone_wav([(440, 1.0)], 1000)
        session, hub = make_session(tmp_path, [volume_bar_record()], wav=wav)

        async def scenario():
            task = asyncio.create_task(session.run(realtime=False))
            while session.counts["frames"] < 3:
                await asyncio.sleep(0)
            frames_before = session.counts["frames"]
            assert session.set_draw_ui("volume bar", False)
            boundary = len(hub.of_type("frame"))
            await task
            return frames_before, boundary

        frames_before, boundary = asyncio.run(scenario())
        frames = hub.of_type("frame")
        # every frame before the toggle shows the script, none after
        for frame in frames[:boundary]:
            assert [s["title"] for s in frame["scripts"]] == ["Volume Bar"]
        assert len(frames) > boundary
        for frame in frames[boundary:]:
            assert frame["scripts"] == []

    def test_toggle_persists_registry(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [volume_bar_record()], duration_ms=200, make_tone_wav=make_tone_wav
        )

        async def scenario():
            task = asyncio.create_task(session.run(realtime=False))
            session.set_draw_ui("VOLUME BAR", False)
            await task

        asyncio.run(scenario())
        saved = registry_load(tmp_path / "scripts.json")
        assert saved.lookup("Volume Bar").drawUI is False


class TestIsolation:
    def test_runaway_script_does_not_break_others(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path,
            [volume_bar_record(), spinner_record()],
            duration_ms=500,
            make_tone_wav=make_tone_wav,
            step_budget=20_000,
        )
        asyncio.run(session.run(realtime=False))
        # the spinner blew its budget on every sound event
        budget_reports = [
            m
            for m in hub.of_type("diagnostics")
            if m.get("title") == "Spinner"
            and any(i["code"] == "E_BUDGET" for i in m["items"])
        ]
        assert len(budget_reports) == 5
        # the volume bar kept animating and rendering the whole time
        bar = session.running["volume bar"].instance
        assert bar.store["target"] == pytest.approx(NORMALIZED_440 / 10.0, abs=1e-9)
        for frame in hub.of_type("frame"):
            titles = [s["title"] for s in frame["scripts"]]
            assert "Volume Bar" in titles and "Spinner" in titles

    def test_broken_registry_script_skipped_with_diagnostics(self, tmp_path, make_tone_wav):
        broken = ScriptRecord(userPrompt="Broken", scriptContent="let x", drawUI=True)
        session, hub = make_session(
            tmp_path,
            [broken, volume_bar_record()],
            duration_ms=200,
            make_tone_wav=make_tone_wav,
        )
        assert set(session.running) == {"volume bar"}
        asyncio.run(session.run(realtime=False))
        assert session.counts["frames"] > 0


class TestAuthoring:
    def agent_config(self, scenario="clean"):
        return AgentConfig(
            mode="mock", mock_fixture_dir=str(FIXTURES / "mock_llm" / scenario)
        )

    def test_authoring_installs_script(self, tmp_path, make_tone_wav):
        wav = make_tone_wav([(440, 1.0)], 1500)
        session, hub = make_session(
            tmp_path, [], wav=wav, agent=self.agent_config()
        )

        async def scenario():
            assert session.start_authoring("a wave")
            assert not session.start_authoring("another")  # busy
            while session.authoring_busy:
                await asyncio.sleep(0.005)
            await session.run(realtime=False)

        asyncio.run(scenario())
        assert "a wave" in session.running
        phases = [m["phase"] for m in hub.of_type("author_status")]
        assert phases == ["enhance", "generate", "compile", "done"]
        assert hub.of_type("script_list")  # list pushed after success
        last_frame = hub.of_type("frame")[-1]
        assert [s["title"] for s in last_frame["scripts"]] == ["a wave"]
        assert registry_load(tmp_path / "scripts.json").lookup("a wave") is not None

    def test_failed_authoring_reports_and_leaves_registry(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path,
            [],
            duration_ms=200,
            make_tone_wav=make_tone_wav,
            agent=self.agent_config("broken"),
        )

        async def scenario():
            assert session.start_authoring("hopeless")
            while session.authoring_busy:
                await asyncio.sleep(0.005)

        asyncio.run(scenario())
        phases = [m["phase"] for m in hub.of_type("author_status")]
        assert phases[-1] == "failed"
        assert session.running == {}
        assert len(registry_load(tmp_path / "scripts.json")) == 0

    def test_hot_swap_resets_state(self, tmp_path, make_tone_wav):
        session, hub = make_session(
            tmp_path, [volume_bar_record()], duration_ms=200, make_tone_wav=make_tone_wav
        )
        instance = session.running["volume bar"].instance
        instance.store["fill"] = 0.123  # mutated runtime state
        from sonoviz.script.compiler import compile_script

        compiled = compile_script(volume_bar_record().scriptContent).script
        session._pending_swaps.append((volume_bar_record(), compiled))
        asyncio.run(session.run(realtime=False))
        swapped = session.running["volume bar"].instance
        assert swapped is not instance  # old instance discarded
