import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sonoviz.agents.config import AgentConfig
from sonoviz.agents.pipeline import (
    AuthoringContext,
    Pipeline,
    PipelineError,
    author,
    strip_code_fences,
)
from sonoviz.agents.registry import (
    RegistryError,
    ScriptRecord,
    ScriptRegistry,
    registry_load,
    registry_save,
)
from sonoviz.agents.templates import load_dsl_reference, load_template, render
from sonoviz.agents.transport import MockTransport, TransportError, prompt_digest
from sonoviz.script.compiler import ScriptSource

from conftest import FIXTURES

MOCK = FIXTURES / "mock_llm"


def mock_config(scenario: str, **kw) -> AgentConfig:
    return AgentConfig(mode="mock", mock_fixture_dir=str(MOCK / scenario), **kw)


class TestStripCodeFences:
    def test_strips_fence_with_language(self):
        assert strip_code_fences("```csharp\nlet a=1\n```") == "let a=1"

    def test_identity(self):
        assert strip_code_fences("let a=1") == "let a=1"

    def test_unbalanced_untouched(self):
        assert strip_code_fences("```\nlet a=1") == "```\nlet a=1"

    def test_trailing_blank_lines_after_fence(self):
        assert strip_code_fences("```\nlet a=1\n```\n\n") == "let a=1"

    def test_leading_blank_lines_trimmed(self):
        assert strip_code_fences("\n\nlet a=1") == "let a=1"

    @given(st.text(max_size=300))
    @settings(max_examples=150, deadline=None)
    def test_idempotent(self, text):
        once = strip_code_fences(text)
        assert strip_code_fences(once) == once


class TestTemplates:
    def test_placeholders_replaced(self):
        rendered = render(
            load_template("enhance"),
            escaped={"USER_PROMPT": "a sound bar"},
            raw={"DSL_REFERENCE": "DOCS HERE"},
        )
        assert "a sound bar" in rendered
        assert "<USER_PROMPT>" not in rendered
        assert "DOCS HERE" in rendered

    def test_angle_brackets_escaped(self):
        rendered = render(
            load_template("enhance"),
            escaped={"USER_PROMPT": "evil <USER_PROMPT> injection"},
            raw={"DSL_REFERENCE": "docs"},
        )
        assert "evil \\<USER_PROMPT> injection" in rendered

    def test_unknown_placeholder_rejected(self):
        with pytest.raises(KeyError):
            render("no placeholders", escaped={"USER_PROMPT": "x"})

    def test_generate_template_mentions_context(self):
        rendered = render(
            load_template("generate"),
            escaped={
                "CURRENT_PROMPT": "make it red",
                "PREVIOUS_PROMPT": "a wave",
                "PREVIOUS_SCRIPT": 'title "a wave"',
                "ENHANCED_PROMPT": "steps",
                "TITLE_TAG": "make it red",
            },
            raw={"DSL_REFERENCE": "docs"},
        )
        assert "make it red" in rendered and "a wave" in rendered

    def test_reference_doc_loads(self):
        docs = load_dsl_reference()
        assert "draw.rect(center, width, height, corner_radius, color)" in docs


class TestMockTransport:
    def test_default_fallback(self):
        transport = MockTransport(str(MOCK / "clean"))
        reply = transport.complete("generate", "anything at all")
        assert 'title "a wave"' in reply

    def test_exact_hash_preferred(self, tmp_path):
        agent_dir = tmp_path / "generate"
        agent_dir.mkdir()
        (agent_dir / "default.txt").write_text("DEFAULT")
        digest = prompt_digest("the exact prompt")
        (agent_dir / f"{digest}.txt").write_text("EXACT")
        transport = MockTransport(str(tmp_path))
        assert transport.complete("generate", "the exact prompt") == "EXACT"
        assert transport.complete("generate", "another prompt") == "DEFAULT"

    def test_missing_fixture_raises(self, tmp_path):
        transport = MockTransport(str(tmp_path))
        with pytest.raises(TransportError):
            transport.complete("generate", "x")


class TestAgentCalls:
    def test_enhance_mentions_movement(self):
        pipeline = Pipeline(mock_config("clean"))
        reply = pipeline.enhance("a sound bar")
        assert "moves up and down" in reply

    def test_generate_requires_enhanced(self):
        pipeline = Pipeline(mock_config("clean"))
        with pytest.raises(ValueError):
            pipeline.generate(AuthoringContext(current_prompt="a wave"))

    def test_generate_strips_fences(self, tmp_path):
        for agent in ("enhance", "generate"):
            (tmp_path / agent).mkdir()
        (tmp_path / "enhance" / "default.txt").write_text("steps")
        (tmp_path / "generate" / "default.txt").write_text(
            '```\ntitle "fenced"\nlet a = 1.0\n```'
        )
        config = AgentConfig(mode="mock", mock_fixture_dir=str(tmp_path))
        pipeline = Pipeline(config)
        source = pipeline.generate(
            AuthoringContext(current_prompt="x", enhanced_prompt="steps")
        )
        assert source.text.startswith('title "fenced"')

    def test_empty_reply_is_error(self, tmp_path):
        (tmp_path / "enhance").mkdir()
        (tmp_path / "enhance" / "default.txt").write_text("   \n")
        pipeline = Pipeline(AgentConfig(mode="mock", mock_fixture_dir=str(tmp_path)))
        with pytest.raises(PipelineError):
            pipeline.enhance("a wave")

    def test_check_requires_diagnostics(self):
        pipeline = Pipeline(mock_config("repairable"))
        with pytest.raises(ValueError):
            pipeline.check(ScriptSource(text="x"), [], "prompt")

    def test_transport_retry_then_fail(self):
        class FlakyTransport:
            def __init__(self):
                self.attempts = 0

            def complete(self, agent, prompt):
                self.attempts += 1
                raise TransportError("down")

        transport = FlakyTransport()
        pipeline = Pipeline(mock_config("clean"), transport=transport)
        result = pipeline.author("a wave", ScriptRegistry())
        assert result.outcome == "failure"
        assert transport.attempts == 2  # one retry, then give up


class TestAuthorLoop:
    def test_clean_zero_iterations(self, tmp_path):
        registry = ScriptRegistry()
        path = tmp_path / "scripts.json"
        result = author("a wave", registry, mock_config("clean"), registry_path=path)
        assert result.succeeded
        assert result.iterations_used == 0
        assert result.script.title == "a wave"
        assert len(registry) == 1
        assert registry.lookup("a wave").drawUI is True
        assert path.exists()

    def test_repairable_one_iteration(self, tmp_path):
        registry = ScriptRegistry()
        result = author(
            "a wave", registry, mock_config("repairable"), registry_path=tmp_path / "s.json"
        )
        assert result.succeeded
        assert result.iterations_used == 1
        assert "draw.circle" not in result.source.text
        # the generate entry carries the compile failure it produced
        generate_entry = [e for e in result.transcript if e.agent == "generate"][0]
        assert any(d.code == "E_UNKNOWN_PRIMITIVE" for d in generate_entry.diagnostics)

    def test_broken_fails_after_three_checks(self, tmp_path):
        registry = ScriptRegistry()
        path = tmp_path / "scripts.json"
        transport = MockTransport(str(MOCK / "broken"))
        result = author(
            "hopeless", registry, mock_config("broken"), registry_path=path, transport=transport
        )
        assert result.outcome == "failure"
        assert result.iterations_used == 3
        assert [agent for agent, _ in transport.calls] == [
            "enhance",
            "generate",
            "check",
            "check",
            "check",
        ]
        assert len(registry) == 0
        assert not path.exists()  # never persisted
        assert result.last_diagnostics  # carries the final compile errors

    def test_call_bound(self, tmp_path):
        config = mock_config("broken", max_repair_iterations=3)
        transport = MockTransport(config.mock_fixture_dir)
        Pipeline(config, transport=transport).author("x", ScriptRegistry())
        assert len(transport.calls) <= 2 + config.max_repair_iterations

    def test_transcript_order_and_digests(self):
        result = author("a wave", ScriptRegistry(), mock_config("repairable"))
        agents = [e.agent for e in result.transcript]
        assert agents == ["enhance", "generate", "check"]
        for entry in result.transcript:
            assert len(entry.request_sha256) == 64
            assert len(entry.response_sha256) == 64

    def test_mock_determinism(self, tmp_path):
        def run():
            result = author("a wave", ScriptRegistry(), mock_config("repairable"))
            return (
                result.source.text,
                [(e.agent, e.request_sha256, e.response_sha256) for e in result.transcript],
            )

        assert run() == run()

    def test_status_phases_in_order(self):
        phases = []
        author(
            "a wave",
            ScriptRegistry(),
            mock_config("repairable"),
            on_status=lambda phase, detail: phases.append(phase),
        )
        assert phases == ["enhance", "generate", "compile", "check", "compile", "done"]

    def test_upsert_replaces_case_insensitively(self, tmp_path):
        registry = ScriptRegistry(
            [ScriptRecord(userPrompt="A WAVE", scriptContent="old", drawUI=False)]
        )
        result = author("a wave", registry, mock_config("clean"))
        assert result.succeeded
        assert len(registry) == 1
        record = registry.lookup("a wave")
        assert record.userPrompt == "a wave"  # replaced, not appended
        assert record.drawUI is True

    def test_previous_context_threaded(self, tmp_path):
        seen = {}

        class SpyTransport(MockTransport):
            def complete(self, agent, prompt):
                seen[agent] = prompt
                return super().complete(agent, prompt)

        transport = SpyTransport(str(MOCK / "clean"))
        previous = ("a wave", ScriptSource(text='title "a wave"\nlet a = 1.0'))
        author(
            "make it red",
            ScriptRegistry(),
            mock_config("clean"),
            previous=previous,
            transport=transport,
        )
        assert "a wave" in seen["generate"]
        assert 'title \\"a wave\\"' in seen["generate"] or 'title "a wave"' in seen["generate"]


class TestRegistry:
    def test_round_trip_preserves_order(self, tmp_path):
        path = tmp_path / "scripts.json"
        registry = ScriptRegistry(
            [
                ScriptRecord("Volume Bar", 'title "Volume Bar"', True),
                ScriptRecord("a wave", 'title "a wave"', False),
            ]
        )
        registry_save(path, registry)
        loaded = registry_load(path)
        assert loaded.records == registry.records

    def test_missing_file_is_empty(self, tmp_path):
        assert registry_load(tmp_path / "absent.json").records == []

    def test_empty_scripts_array(self, tmp_path):
        path = tmp_path / "scripts.json"
        path.write_text('{"scripts":[]}')
        assert registry_load(path).records == []

    def test_exact_schema_on_disk(self, tmp_path):
        path = tmp_path / "scripts.json"
        registry_save(
            path, ScriptRegistry([ScriptRecord("p", "content", True)])
        )
        payload = json.loads(path.read_text())
        assert payload == {
            "scripts": [{"userPrompt": "p", "scriptContent": "content", "drawUI": True}]
        }

    def test_malformed_json_errors_with_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"scripts": [}')
        with pytest.raises(RegistryError) as info:
            registry_load(path)
        assert "line 1" in str(info.value)

    def test_wrong_shape_errors(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"notscripts": []}')
        with pytest.raises(RegistryError):
            registry_load(path)

    def test_missing_field_errors(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"scripts": [{"userPrompt": "x"}]}')
        with pytest.raises(RegistryError):
            registry_load(path)

    def test_duplicate_titles_rejected(self):
        with pytest.raises(RegistryError):
            ScriptRegistry(
                [ScriptRecord("Wave", "a", True), ScriptRecord("wave", "b", True)]
            )

    def test_case_insensitive_lookup(self):
        registry = ScriptRegistry([ScriptRecord("Volume Bar", "x", True)])
        assert registry.lookup("volume bar") is not None
        assert registry.lookup("VOLUME BAR") is not None
        assert registry.lookup("nope") is None

    def test_set_draw_ui(self, tmp_path):
        registry = ScriptRegistry([ScriptRecord("Wave", "x", True)])
        assert registry.set_draw_ui("WAVE", False)
        assert registry.lookup("wave").drawUI is False
        assert not registry.set_draw_ui("ghost", False)

    def test_atomic_save_leaves_no_temp_files(self, tmp_path):
        path = tmp_path / "scripts.json"
        registry_save(path, ScriptRegistry([ScriptRecord("p", "c", True)]))
        registry_save(path, ScriptRegistry([ScriptRecord("p", "c2", True)]))
        assert [p.name for p in tmp_path.iterdir()] == ["scripts.json"]
        assert registry_load(path).lookup("p").scriptContent == "c2"
