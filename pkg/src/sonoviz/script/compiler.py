"""Compilation facade: source text -> CompiledScript + diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from sonoviz.script import ast_nodes as ast
from sonoviz.script.checks import check_module
from sonoviz.script.diagnostics import has_errors
from sonoviz.script.interpreter import compile_block, compile_expr
from sonoviz.script.parser import parse


@dataclass(frozen=True)
class ScriptSource:
    """Raw script text plus where it came from."""

    text: str
    origin: str = "file"  # agent | file | fixture

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("script source is empty")


@dataclass
class CompiledScript:
    """A validated script ready to instantiate."""

    title: str
    variables: tuple  # ordered (name, initializer AST) pairs
    handlers: dict  # name -> HandlerDecl
    doc_summary: Optional[str]
    source_text: str
    init_fns: tuple = field(repr=False, default=())  # (name, closure) pairs
    handler_fns: dict = field(repr=False, default_factory=dict)

    @property
    def var_names(self) -> tuple:
        return tuple(name for name, _ in self.variables)


@dataclass
class CompileResult:
    """Outcome of one compilation: a script when there were no errors,
    plus every diagnostic (warnings included) either way."""

    script: Optional[CompiledScript]
    diagnostics: list

    @property
    def ok(self) -> bool:
        return self.script is not None

    @property
    def errors(self) -> list:
        return [d for d in self.diagnostics if d.is_error]


def compile_script(source: Union[str, ScriptSource]) -> CompileResult:
    """Lex, parse, and statically verify a script.

    Diagnostics are returned, never raised; any error-severity diagnostic
    means no CompiledScript is produced.
    """
    if isinstance(source, str):
        source = ScriptSource(text=source)
    module, diagnostics = parse(source.text)
    diagnostics = list(diagnostics) + check_module(module)
    diagnostics.sort(key=lambda d: (d.line, d.col))
    if has_errors(diagnostics):
        return CompileResult(script=None, diagnostics=diagnostics)

    init_fns = tuple((let.name, compile_expr(let.init)) for let in module.lets)
    handler_fns = {h.name: compile_block(h.body) for h in module.handlers}
    doc_summary = None
    for let in module.lets:
        if let.name == "summary" and isinstance(let.init, ast.StringLit):
            doc_summary = let.init.value
    script = CompiledScript(
        title=module.titles[0].value,
        variables=tuple((let.name, let.init) for let in module.lets),
        handlers={h.name: h for h in module.handlers},
        doc_summary=doc_summary,
        source_text=source.text,
        init_fns=init_fns,
        handler_fns=handler_fns,
    )
    return CompileResult(script=script, diagnostics=diagnostics)
