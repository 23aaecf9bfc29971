import pytest

from sonoviz.script.compiler import ScriptSource, compile_script
from sonoviz.script.diagnostics import CODE_CATALOG, Severity
from sonoviz.script.lexer import tokenize

MINIMAL_HANDLERS = """
fn on_sound(classification, frequency, distance) {
}

fn update(dt) {
}

fn draw() {
}
"""


def compile_text(body: str):
    return compile_script('title "t"\n' + body + MINIMAL_HANDLERS)


def codes(result):
    return [d.code for d in result.diagnostics]


class TestLexer:
    def test_positions(self):
        tokens = tokenize('let x = 1.5\nlet y = "hi"')
        let_tok = tokens[0]
        assert (let_tok.line, let_tok.col) == (1, 1)
        x_tok = tokens[1]
        assert (x_tok.line, x_tok.col) == (1, 5)
        y_line = [t for t in tokens if t.value == "y"][0]
        assert (y_line.line, y_line.col) == (2, 5)

    def test_range_vs_float(self):
        values = [t.value for t in tokenize("0..4")]
        assert values[:3] == ["0", "..", "4"]
        values = [t.value for t in tokenize("0.5")]
        assert values[0] == "0.5"

    def test_newlines_suppressed_in_brackets(self):
        tokens = tokenize("f(1,\n 2)")
        assert all(t.type != "NEWLINE" for t in tokens[:-2])

    def test_string_escapes(self):
        tok = tokenize('"a\\n\\"b\\\\"')[0]
        assert tok.value == 'a\n"b\\'

    def test_comments_skipped(self):
        tokens = tokenize("let a = 1 // trailing\n// whole line\nlet b = 2")
        words = [t.value for t in tokens if t.type in ("IDENT", "KEYWORD")]
        assert words == ["let", "a", "let", "b"]


class TestCompileSurface:
    def test_volume_bar_compiles_clean(self, volume_bar_source):
        result = compile_script(volume_bar_source)
        assert result.ok
        assert result.diagnostics == []
        assert result.script.title == "Volume Bar"
        assert result.script.var_names == (
            "bar_width",
            "bar_height",
            "fill",
            "target",
            "smooth_speed",
            "bar_color",
        )

    def test_empty_source_rejected(self):
        with pytest.raises(ValueError):
            ScriptSource(text="   \n")

    def test_missing_draw(self):
        result = compile_script(
            'title "t"\nfn on_sound(classification, frequency, distance) {\n}\nfn update(dt) {\n}\n'
        )
        assert not result.ok
        assert codes(result) == ["E_MISSING_HANDLER"]

    def test_unknown_primitive_checker_rule(self):
        result = compile_text("fnord = 0\n".replace("fnord = 0\n", ""))
        assert result.ok
        bad = compile_script(
            'title "t"\n'
            "fn on_sound(classification, frequency, distance) {\n}\n"
            "fn update(dt) {\n}\n"
            "fn draw() {\n  draw.rounded_rect(vec2(0,0), 3.0, 3.0, 0.2, rgb(0,0,0))\n}\n"
        )
        assert [d.code for d in bad.errors] == ["E_UNKNOWN_PRIMITIVE"]

    def test_let_without_initializer(self):
        result = compile_script("title \"t\"\nlet x\n" + MINIMAL_HANDLERS)
        assert [d.code for d in result.errors] == ["E_UNINITIALIZED_VAR"]

    def test_warning_does_not_block(self):
        result = compile_script(
            'title "t"\n'
            "fn on_sound(classification, frequency, distance) {\n}\n"
            "fn update(dt) {\n}\n"
            "fn draw() {\n  draw.rect(vec2(0,0), 9.0, 3.0, 0.1, rgb(1,1,1))\n}\n"
        )
        assert result.ok
        assert [d.code for d in result.diagnostics] == ["W_SIZE_RANGE"]
        assert result.diagnostics[0].severity is Severity.WARNING

    def test_later_defaults_see_earlier_vars(self):
        result = compile_script('title "t"\nlet a = 2.0\nlet b = a * 3.0\n' + MINIMAL_HANDLERS)
        assert result.ok

    def test_earlier_defaults_cannot_see_later(self):
        result = compile_script('title "t"\nlet b = a * 3.0\nlet a = 2.0\n' + MINIMAL_HANDLERS)
        assert [d.code for d in result.errors] == ["E_UNDEFINED_VAR"]

    def test_doc_summary_extracted(self):
        result = compile_script(
            'title "t"\nlet summary = "a mellow bar"\n' + MINIMAL_HANDLERS
        )
        assert result.script.doc_summary == "a mellow bar"

    def test_multiple_errors_reported_together(self):
        result = compile_script(
            'title "t"\n'
            "let dup = 1.0\n"
            "let dup = 2.0\n"
            "fn on_sound(classification, frequency, distance) {\n  ghost = 1.0\n}\n"
            "fn update(dt) {\n}\n"
        )
        assert set(codes(result)) == {"E_DUPLICATE", "E_UNDEFINED_VAR", "E_MISSING_HANDLER"}

    def test_reserved_names_rejected(self):
        result = compile_script('title "t"\nlet lerp = 1.0\n' + MINIMAL_HANDLERS)
        assert "E_DUPLICATE" in codes(result)

    def test_wrong_handler_arity(self):
        result = compile_script(
            'title "t"\n'
            "fn on_sound(frequency) {\n}\n"
            "fn update(dt) {\n}\n"
            "fn draw() {\n}\n"
        )
        assert "E_ARITY" in codes(result)

    def test_draw_call_as_expression_rejected(self):
        result = compile_script(
            'title "t"\nlet x = 0.0\n'
            "fn on_sound(classification, frequency, distance) {\n}\n"
            "fn update(dt) {\n}\n"
            "fn draw() {\n  x = draw.disc(vec2(0,0), 1.0, rgb(1,1,1))\n}\n"
        )
        assert "E_TYPE" in [d.code for d in result.errors]

    def test_builtin_arity(self):
        result = compile_script(
            'title "t"\nlet x = clamp(1.0)\n' + MINIMAL_HANDLERS
        )
        assert [d.code for d in result.errors] == ["E_ARITY"]

    def test_condition_must_be_bool(self):
        result = compile_script(
            'title "t"\nlet x = 0.0\n'
            "fn on_sound(classification, frequency, distance) {\n  if frequency { x = 1.0 }\n}\n"
            "fn update(dt) {\n}\n"
            "fn draw() {\n}\n"
        )
        assert "E_TYPE" in [d.code for d in result.errors]

    def test_diagnostics_sorted_by_position(self):
        result = compile_script(
            'title "t"\n'
            "let a = ghost1\n"
            "let b = ghost2\n" + MINIMAL_HANDLERS
        )
        positions = [(d.line, d.col) for d in result.diagnostics]
        assert positions == sorted(positions)


CORPUS_EXPECTATIONS = {
    # fixture -> list of (code, line, col) that must appear
    "missing_draw.ssc": [("E_MISSING_HANDLER", 12, 1)],
    "unknown_primitive.ssc": [("E_UNKNOWN_PRIMITIVE", 12, 3)],
    "bad_arity.ssc": [("E_ARITY", 12, 3)],
    "undefined_var.ssc": [("E_UNDEFINED_VAR", 6, 3), ("E_UNDEFINED_VAR", 13, 25)],
    "uninitialized.ssc": [("E_UNINITIALIZED_VAR", 3, 1)],
    "type_mismatch.ssc": [("E_TYPE", 12, 35), ("E_TYPE", 12, 41)],
    "syntax_error.ssc": [("E_SYNTAX", 3, 14)],
    "handler_calls.ssc": [("E_RECURSION", 4, 3), ("E_UNKNOWN_HANDLER", 13, 1)],
    "duplicates.ssc": [("E_DUPLICATE", 2, 1), ("E_MISSING_TITLE", 12, 1)],
    "infinite_loop.ssc": [("W_SIZE_RANGE", 15, 25), ("W_SIZE_RANGE", 15, 31)],
}


class TestDiagnosticCorpus:
    @pytest.mark.parametrize("fixture", sorted(CORPUS_EXPECTATIONS))
    def test_fixture_positions(self, fixtures_dir, fixture):
        text = (fixtures_dir / "diagnostics" / fixture).read_text(encoding="utf-8")
        result = compile_script(text)
        found = {(d.code, d.line, d.col) for d in result.diagnostics}
        for expectation in CORPUS_EXPECTATIONS[fixture]:
            assert expectation in found, f"{fixture}: missing {expectation}, got {found}"

    def test_positions_inside_source(self, fixtures_dir):
        for path in sorted((fixtures_dir / "diagnostics").glob("*.ssc")):
            lines = path.read_text(encoding="utf-8").split("\n")
            result = compile_script(path.read_text(encoding="utf-8"))
            for d in result.diagnostics:
                assert 1 <= d.line <= len(lines) + 1, f"{path.name}: line {d.line}"
                assert d.col >= 1

    def test_corpus_covers_catalog(self, fixtures_dir):
        """Ten fixtures reach every catalog code (E_BUDGET via execution)."""
        from sonoviz.script.interpreter import dispatch_sound, instantiate

        reached = set()
        fixture_files = sorted((fixtures_dir / "diagnostics").glob("*.ssc"))
        assert len(fixture_files) == 10
        for path in fixture_files:
            result = compile_script(path.read_text(encoding="utf-8"))
            reached |= {d.code for d in result.diagnostics}
            if result.ok:
                instance = instantiate(result.script, 50_000)
                diag = dispatch_sound(instance, "unknown", 5.0, 1.0)
                if diag is not None:
                    reached.add(diag.code)
        assert reached == set(CODE_CATALOG)
