"""The shape-script language: compiler, static checks, and sandboxed interpreter."""

from sonoviz.script.compiler import CompiledScript, CompileResult, compile_script
from sonoviz.script.diagnostics import CODE_CATALOG, Diagnostic, Severity
from sonoviz.script.interpreter import (
    ScriptInitError,
    ScriptInstance,
    dispatch_sound,
    instantiate,
    render,
    tick,
)
from sonoviz.script.values import (
    Arc,
    Color,
    Disc,
    Line,
    Polygon,
    Polyline,
    Rect,
    RegularPolygon,
    Ring,
    ShapeCommand,
    Triangle,
    Vec2,
)

DEFAULT_STEP_BUDGET = 200_000

__all__ = [
    "Arc",
    "CODE_CATALOG",
    "Color",
    "CompileResult",
    "CompiledScript",
    "DEFAULT_STEP_BUDGET",
    "Diagnostic",
    "Disc",
    "Line",
    "Polygon",
    "Polyline",
    "Rect",
    "RegularPolygon",
    "Ring",
    "ScriptInitError",
    "ScriptInstance",
    "Severity",
    "ShapeCommand",
    "Triangle",
    "Vec2",
    "compile_script",
    "dispatch_sound",
    "instantiate",
    "render",
    "tick",
]
