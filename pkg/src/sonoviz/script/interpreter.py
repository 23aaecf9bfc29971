"""Sandboxed execution of compiled scripts.

Each handler body is compiled once into a tree of Python closures; running
a handler evaluates those closures against a scratch copy of the variable
store.  Every statement, expression, and loop iteration costs one step
from the invocation's budget, so no script can run unboundedly.  On any
fault (budget, type error, bad draw argument) the scratch copy is thrown
away: the store is exactly as it was before the call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from sonoviz.script import ast_nodes as ast
from sonoviz.script.diagnostics import (
    E_BUDGET,
    E_TYPE,
    E_UNDEFINED_VAR,
    Diagnostic,
    Severity,
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
    Triangle,
    Vec2,
    kind_of,
)

MAX_RUNTIME_DIAGNOSTICS = 32


class ScriptError(Exception):
    """Internal fault raised by compiled closures; converted to a Diagnostic."""

    def __init__(self, code: str, line: int, col: int, message: str):
        super().__init__(message)
        self.code = code
        self.line = line
        self.col = col
        self.message = message

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(Severity.ERROR, self.code, self.line, self.col, self.message)


class ScriptInitError(Exception):
    """Raised when evaluating declared defaults fails."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _RT:
    """Per-invocation runtime: step counter and the draw command sink."""

    __slots__ = ("steps", "budget", "sink")

    def __init__(self, budget: int, sink: Optional[list] = None):
        self.steps = 0
        self.budget = budget
        self.sink = sink


@dataclass
class ScriptInstance:
    """A live script: compiled code plus its mutable variable store."""

    compiled: "CompiledScript"  # noqa: F821 - defined in compiler.py
    store: dict
    step_budget: int
    last_commands: tuple = ()
    runtime_diagnostics: list = field(default_factory=list)

    def record(self, diagnostic: Diagnostic):
        self.runtime_diagnostics.append(diagnostic)
        del self.runtime_diagnostics[:-MAX_RUNTIME_DIAGNOSTICS]


# ---------------------------------------------------------------------------
# expression compilation
# ---------------------------------------------------------------------------


def _kindname(v) -> str:
    try:
        return kind_of(v)
    except TypeError:
        return type(v).__name__


def compile_expr(node) -> Callable:
    return _EXPR_COMPILERS[type(node)](node)


def _c_number(node: ast.NumberLit):
    value = float(node.value)
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        return value

    return run


def _c_string(node: ast.StringLit):
    value = node.value
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        return value

    return run


def _c_bool(node: ast.BoolLit):
    value = node.value
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        return value

    return run


def _c_list(node: ast.ListLit):
    items = tuple(compile_expr(item) for item in node.items)
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        return tuple(f(env, rt) for f in items)

    return run


def _c_name(node: ast.Name):
    name = node.ident
    line, col = node.line, node.col
    if name == "pi":
        pi = math.pi

        def run_pi(env, rt):
            rt.steps = s = rt.steps + 1
            if s > rt.budget:
                raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
            return pi

        return run_pi

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        try:
            return env[name]
        except KeyError:
            raise ScriptError(E_UNDEFINED_VAR, line, col, f"undefined variable '{name}'")

    return run


def _c_unary(node: ast.Unary):
    operand = compile_expr(node.operand)
    line, col = node.line, node.col
    if node.op == "-":

        def run_neg(env, rt):
            rt.steps = s = rt.steps + 1
            if s > rt.budget:
                raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
            v = operand(env, rt)
            t = type(v)
            if t is float:
                return -v
            if t is Vec2:
                return Vec2(-v[0], -v[1])
            raise ScriptError(E_TYPE, line, col, f"cannot negate a {_kindname(v)}")

        return run_neg

    def run_not(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        v = operand(env, rt)
        if v is True:
            return False
        if v is False:
            return True
        raise ScriptError(E_TYPE, line, col, f"'!' needs a boolean, found {_kindname(v)}")

    return run_not


def _c_binary(node: ast.Binary):
    left = compile_expr(node.left)
    right = compile_expr(node.right)
    line, col = node.line, node.col
    op = node.op

    def budget_check(rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")

    if op == "+":

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            ta, tb = type(a), type(b)
            if ta is float and tb is float:
                return a + b
            if ta is Vec2 and tb is Vec2:
                return Vec2(a[0] + b[0], a[1] + b[1])
            raise ScriptError(
                E_TYPE, line, col, f"cannot add {_kindname(a)} and {_kindname(b)}"
            )

        return run
    if op == "-":

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            ta, tb = type(a), type(b)
            if ta is float and tb is float:
                return a - b
            if ta is Vec2 and tb is Vec2:
                return Vec2(a[0] - b[0], a[1] - b[1])
            raise ScriptError(
                E_TYPE, line, col, f"cannot subtract {_kindname(b)} from {_kindname(a)}"
            )

        return run
    if op == "*":

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            ta, tb = type(a), type(b)
            if ta is float and tb is float:
                return a * b
            if ta is Vec2 and tb is float:
                return Vec2(a[0] * b, a[1] * b)
            if ta is float and tb is Vec2:
                return Vec2(b[0] * a, b[1] * a)
            raise ScriptError(
                E_TYPE, line, col, f"cannot multiply {_kindname(a)} by {_kindname(b)}"
            )

        return run
    if op == "/":

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            ta, tb = type(a), type(b)
            if tb is float and b == 0.0:
                raise ScriptError(E_TYPE, line, col, "division by zero")
            if ta is float and tb is float:
                return a / b
            if ta is Vec2 and tb is float:
                return Vec2(a[0] / b, a[1] / b)
            raise ScriptError(
                E_TYPE, line, col, f"cannot divide {_kindname(a)} by {_kindname(b)}"
            )

        return run
    if op == "%":

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            if type(a) is float and type(b) is float:
                if b == 0.0:
                    raise ScriptError(E_TYPE, line, col, "modulo by zero")
                return math.fmod(a, b)
            raise ScriptError(
                E_TYPE, line, col, f"'%' needs numbers, found {_kindname(a)} and {_kindname(b)}"
            )

        return run
    if op in ("==", "!="):
        want = op == "=="

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            eq = type(a) is type(b) and a == b
            return eq is want

        return run
    if op in ("<", "<=", ">", ">="):
        cmp = {
            "<": lambda a, b: a < b,
            "<=": lambda a, b: a <= b,
            ">": lambda a, b: a > b,
            ">=": lambda a, b: a >= b,
        }[op]

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            b = right(env, rt)
            if type(a) is float and type(b) is float:
                return cmp(a, b)
            raise ScriptError(
                E_TYPE,
                line,
                col,
                f"'{op}' compares numbers, found {_kindname(a)} and {_kindname(b)}",
            )

        return run
    if op in ("&&", "||"):
        stop_value = op == "||"  # || stops on True, && stops on False

        def run(env, rt):
            budget_check(rt)
            a = left(env, rt)
            if a is not True and a is not False:
                raise ScriptError(
                    E_TYPE, line, col, f"'{op}' needs booleans, found {_kindname(a)}"
                )
            if a is stop_value:
                return a
            b = right(env, rt)
            if b is not True and b is not False:
                raise ScriptError(
                    E_TYPE, line, col, f"'{op}' needs booleans, found {_kindname(b)}"
                )
            return b

        return run
    raise AssertionError(f"unhandled operator {op}")


def _c_member(node: ast.Member):
    base = compile_expr(node.base)
    fld = node.field
    line, col = node.line, node.col
    vec_idx = {"x": 0, "y": 1}.get(fld)
    color_idx = {"r": 0, "g": 1, "b": 2, "a": 3}.get(fld)

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        v = base(env, rt)
        t = type(v)
        if t is Vec2 and vec_idx is not None:
            return v[vec_idx]
        if t is Color and color_idx is not None:
            return v[color_idx]
        raise ScriptError(E_TYPE, line, col, f"a {_kindname(v)} has no field '{fld}'")

    return run


def _c_index(node: ast.Index):
    base = compile_expr(node.base)
    index = compile_expr(node.index)
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        seq = base(env, rt)
        if type(seq) is not tuple:
            raise ScriptError(
                E_TYPE, line, col, f"only lists can be indexed, found {_kindname(seq)}"
            )
        idx = index(env, rt)
        if type(idx) is not float or idx != int(idx):
            raise ScriptError(E_TYPE, line, col, "list index must be a whole number")
        i = int(idx)
        if not 0 <= i < len(seq):
            raise ScriptError(
                E_TYPE, line, col, f"index {i} out of range for list of {len(seq)}"
            )
        return seq[i]

    return run


# ---------------------------------------------------------------------------
# builtin and draw calls
# ---------------------------------------------------------------------------


def _need_number(v, what: str, line: int, col: int) -> float:
    if type(v) is not float or not math.isfinite(v):
        raise ScriptError(E_TYPE, line, col, f"{what} must be a finite number, found {_kindname(v)}")
    return v


def _need_nonneg(v, what: str, line: int, col: int) -> float:
    v = _need_number(v, what, line, col)
    if v < 0:
        raise ScriptError(E_TYPE, line, col, f"{what} must be >= 0, found {v:g}")
    return v


def _need_vec2(v, what: str, line: int, col: int) -> Vec2:
    if type(v) is not Vec2:
        raise ScriptError(E_TYPE, line, col, f"{what} must be a vec2, found {_kindname(v)}")
    return v


def _need_color(v, what: str, line: int, col: int) -> Color:
    if type(v) is not Color:
        raise ScriptError(E_TYPE, line, col, f"{what} must be a color, found {_kindname(v)}")
    return v


def _need_points(v, minimum: int, what: str, line: int, col: int) -> tuple:
    if type(v) is not tuple:
        raise ScriptError(E_TYPE, line, col, f"{what} must be a list of vec2")
    if len(v) < minimum:
        raise ScriptError(E_TYPE, line, col, f"{what} needs at least {minimum} points")
    for p in v:
        if type(p) is not Vec2:
            raise ScriptError(E_TYPE, line, col, f"{what} must contain only vec2 values")
    return v


def _make_builtin(name: str, argc: int, line: int, col: int):
    """Implementation closure for one builtin call site."""
    if name == "clamp":

        def impl(a):
            v = _need_number(a[0], "clamp value", line, col)
            lo = _need_number(a[1], "clamp low", line, col)
            hi = _need_number(a[2], "clamp high", line, col)
            return min(hi, max(lo, v))

    elif name == "lerp":

        def impl(a):
            x, y, t = a
            t = _need_number(t, "lerp t", line, col)
            t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
            tx, ty = type(x), type(y)
            if tx is float and ty is float:
                return x + (y - x) * t
            if tx is Vec2 and ty is Vec2:
                return Vec2(x[0] + (y[0] - x[0]) * t, x[1] + (y[1] - x[1]) * t)
            if tx is Color and ty is Color:
                return Color.clamped(
                    x[0] + (y[0] - x[0]) * t,
                    x[1] + (y[1] - x[1]) * t,
                    x[2] + (y[2] - x[2]) * t,
                    x[3] + (y[3] - x[3]) * t,
                )
            raise ScriptError(
                E_TYPE,
                line,
                col,
                f"lerp needs two numbers, vec2s, or colors, found "
                f"{_kindname(x)} and {_kindname(y)}",
            )

    elif name == "abs":

        def impl(a):
            return abs(_need_number(a[0], "abs argument", line, col))

    elif name == "min":

        def impl(a):
            return min(
                _need_number(a[0], "min argument", line, col),
                _need_number(a[1], "min argument", line, col),
            )

    elif name == "max":

        def impl(a):
            return max(
                _need_number(a[0], "max argument", line, col),
                _need_number(a[1], "max argument", line, col),
            )

    elif name == "floor":

        def impl(a):
            return float(math.floor(_need_number(a[0], "floor argument", line, col)))

    elif name == "sin":

        def impl(a):
            return math.sin(_need_number(a[0], "sin argument", line, col))

    elif name == "cos":

        def impl(a):
            return math.cos(_need_number(a[0], "cos argument", line, col))

    elif name == "rgb":

        def impl(a):
            parts = [_need_number(v, "rgb component", line, col) for v in a]
            return Color.clamped(*parts)

    elif name == "rgb255":

        def impl(a):
            parts = [_need_number(v, "rgb255 component", line, col) / 255.0 for v in a]
            return Color.clamped(*parts)

    elif name == "vec2":

        def impl(a):
            return Vec2(
                _need_number(a[0], "vec2 x", line, col),
                _need_number(a[1], "vec2 y", line, col),
            )

    else:
        raise AssertionError(f"unknown builtin {name}")
    return impl


def _make_draw(name: str, line: int, col: int):
    """Command constructor for one draw.<primitive> call site."""
    if name == "rect":

        def build(a):
            return Rect(
                center=_need_vec2(a[0], "rect center", line, col),
                width=_need_nonneg(a[1], "rect width", line, col),
                height=_need_nonneg(a[2], "rect height", line, col),
                corner_radius=_need_nonneg(a[3], "rect corner_radius", line, col),
                color=_need_color(a[4], "rect color", line, col),
            )

    elif name == "disc":

        def build(a):
            return Disc(
                center=_need_vec2(a[0], "disc center", line, col),
                radius=_need_nonneg(a[1], "disc radius", line, col),
                color=_need_color(a[2], "disc color", line, col),
            )

    elif name == "ring":

        def build(a):
            return Ring(
                center=_need_vec2(a[0], "ring center", line, col),
                radius=_need_nonneg(a[1], "ring radius", line, col),
                thickness=_need_nonneg(a[2], "ring thickness", line, col),
                color=_need_color(a[3], "ring color", line, col),
            )

    elif name == "arc":

        def build(a):
            return Arc(
                center=_need_vec2(a[0], "arc center", line, col),
                radius=_need_nonneg(a[1], "arc radius", line, col),
                thickness=_need_nonneg(a[2], "arc thickness", line, col),
                angle_start_rad=_need_number(a[3], "arc angle_start_rad", line, col),
                angle_end_rad=_need_number(a[4], "arc angle_end_rad", line, col),
                color=_need_color(a[5], "arc color", line, col),
            )

    elif name == "line":

        def build(a):
            return Line(
                a=_need_vec2(a[0], "line a", line, col),
                b=_need_vec2(a[1], "line b", line, col),
                thickness=_need_nonneg(a[2], "line thickness", line, col),
                color=_need_color(a[3], "line color", line, col),
            )

    elif name == "polyline":

        def build(a):
            return Polyline(
                points=_need_points(a[0], 2, "polyline points", line, col),
                thickness=_need_nonneg(a[1], "polyline thickness", line, col),
                color=_need_color(a[2], "polyline color", line, col),
            )

    elif name == "polygon":

        def build(a):
            return Polygon(
                points=_need_points(a[0], 3, "polygon points", line, col),
                color=_need_color(a[1], "polygon color", line, col),
            )

    elif name == "triangle":

        def build(a):
            return Triangle(
                a=_need_vec2(a[0], "triangle a", line, col),
                b=_need_vec2(a[1], "triangle b", line, col),
                c=_need_vec2(a[2], "triangle c", line, col),
                color=_need_color(a[3], "triangle color", line, col),
            )

    elif name == "regular_polygon":

        def build(a):
            sides = _need_number(a[1], "regular_polygon sides", line, col)
            if sides != int(sides) or int(sides) < 3:
                raise ScriptError(
                    E_TYPE, line, col, "regular_polygon sides must be a whole number >= 3"
                )
            return RegularPolygon(
                center=_need_vec2(a[0], "regular_polygon center", line, col),
                sides=int(sides),
                radius=_need_nonneg(a[2], "regular_polygon radius", line, col),
                rotation_rad=_need_number(a[3], "regular_polygon rotation_rad", line, col),
                color=_need_color(a[4], "regular_polygon color", line, col),
            )

    else:
        raise AssertionError(f"unknown primitive {name}")
    return build


def _c_call(node: ast.Call):
    args = tuple(compile_expr(a) for a in node.args)
    line, col = node.line, node.col
    if node.is_draw:
        build = _make_draw(node.func, line, col)

        def run_draw(env, rt):
            rt.steps = s = rt.steps + 1
            if s > rt.budget:
                raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
            command = build(tuple(f(env, rt) for f in args))
            # commands only land somewhere during a render pass
            if rt.sink is not None:
                rt.sink.append(command)
            return None

        return run_draw

    impl = _make_builtin(node.func, len(args), line, col)

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        return impl(tuple(f(env, rt) for f in args))

    return run


_EXPR_COMPILERS = {
    ast.NumberLit: _c_number,
    ast.StringLit: _c_string,
    ast.BoolLit: _c_bool,
    ast.ListLit: _c_list,
    ast.Name: _c_name,
    ast.Unary: _c_unary,
    ast.Binary: _c_binary,
    ast.Call: _c_call,
    ast.Member: _c_member,
    ast.Index: _c_index,
}


# ---------------------------------------------------------------------------
# statement compilation
# ---------------------------------------------------------------------------


def compile_stmt(node) -> Callable:
    return _STMT_COMPILERS[type(node)](node)


def compile_block(stmts) -> Callable:
    fns = tuple(compile_stmt(s) for s in stmts)
    if not fns:

        def run_empty(env, rt):
            return None

        return run_empty
    if len(fns) == 1:
        return fns[0]

    def run(env, rt):
        for f in fns:
            f(env, rt)

    return run


def _c_assign(node: ast.Assign):
    value = compile_expr(node.value)
    target = node.target
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        env[target] = value(env, rt)

    return run


def _c_exprstmt(node: ast.ExprStmt):
    expr = compile_expr(node.expr)

    def run(env, rt):
        expr(env, rt)

    return run


def _c_if(node: ast.If):
    cond = compile_expr(node.cond)
    then_body = compile_block(node.then_body)
    else_body = compile_block(node.else_body) if node.else_body else None
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        c = cond(env, rt)
        if c is True:
            then_body(env, rt)
        elif c is False:
            if else_body is not None:
                else_body(env, rt)
        else:
            raise ScriptError(
                E_TYPE, line, col, f"if condition must be a boolean, found {_kindname(c)}"
            )

    return run


def _c_while(node: ast.While):
    cond = compile_expr(node.cond)
    body = compile_block(node.body)
    line, col = node.line, node.col

    def run(env, rt):
        budget = rt.budget
        while True:
            rt.steps = s = rt.steps + 1
            if s > budget:
                raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
            c = cond(env, rt)
            if c is False:
                return
            if c is not True:
                raise ScriptError(
                    E_TYPE,
                    line,
                    col,
                    f"while condition must be a boolean, found {_kindname(c)}",
                )
            body(env, rt)

    return run


def _c_for(node: ast.ForRange):
    start = compile_expr(node.start)
    stop = compile_expr(node.stop)
    body = compile_block(node.body)
    var = node.var
    line, col = node.line, node.col

    def run(env, rt):
        rt.steps = s = rt.steps + 1
        if s > rt.budget:
            raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
        a = start(env, rt)
        b = stop(env, rt)
        if type(a) is not float or type(b) is not float:
            raise ScriptError(E_TYPE, line, col, "range bounds must be numbers")
        budget = rt.budget
        i = a
        while i < b:
            rt.steps = s = rt.steps + 1
            if s > budget:
                raise ScriptError(E_BUDGET, line, col, "step budget exhausted")
            env[var] = i
            body(env, rt)
            i += 1.0
        env.pop(var, None)

    return run


_STMT_COMPILERS = {
    ast.Assign: _c_assign,
    ast.ExprStmt: _c_exprstmt,
    ast.If: _c_if,
    ast.While: _c_while,
    ast.ForRange: _c_for,
}


# ---------------------------------------------------------------------------
# instance lifecycle
# ---------------------------------------------------------------------------


def instantiate(compiled, step_budget: int = 200_000) -> ScriptInstance:
    """Build a live instance: evaluate declared defaults top to bottom
    (later defaults may use earlier variables) under one shared budget."""
    if step_budget <= 0:
        raise ValueError("step budget must be positive")
    store: dict = {}
    rt = _RT(step_budget)
    for name, init_fn in compiled.init_fns:
        try:
            value = init_fn(store, rt)
        except ScriptError as exc:
            raise ScriptInitError(exc.to_diagnostic()) from exc
        if type(value) is float and not math.isfinite(value):
            raise ScriptInitError(
                Diagnostic(
                    Severity.ERROR,
                    E_TYPE,
                    1,
                    1,
                    f"default value of '{name}' is not finite",
                )
            )
        store[name] = value
    return ScriptInstance(compiled=compiled, store=store, step_budget=step_budget)


def _run_handler(instance: ScriptInstance, name: str, args: dict, sink) -> Optional[Diagnostic]:
    """Run one handler against a scratch environment and commit on success."""
    body = instance.compiled.handler_fns[name]
    env = dict(instance.store)
    env.update(args)
    rt = _RT(instance.step_budget, sink)
    try:
        body(env, rt)
    except ScriptError as exc:
        diag = exc.to_diagnostic()
        instance.record(diag)
        return diag
    var_names = instance.compiled.var_names
    for var in var_names:
        v = env[var]
        if type(v) is float and not math.isfinite(v):
            diag = Diagnostic(
                Severity.ERROR,
                E_TYPE,
                1,
                1,
                f"variable '{var}' became non-finite during {name}",
            )
            instance.record(diag)
            return diag
    store = instance.store
    for var in var_names:
        store[var] = env[var]
    return None


def dispatch_sound(
    instance: ScriptInstance,
    classification: str,
    frequency: float,
    distance: float,
) -> Optional[Diagnostic]:
    """Deliver one sound event to the script's on_sound handler.  Returns a
    Diagnostic (store untouched) on failure, None on success."""
    handler = instance.compiled.handlers["on_sound"]
    args = {
        handler.params[0]: str(classification),
        handler.params[1]: float(frequency),
        handler.params[2]: float(distance),
    }
    return _run_handler(instance, "on_sound", args, None)


def tick(instance: ScriptInstance, dt: float) -> Optional[Diagnostic]:
    """Advance the script's update handler by dt seconds."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    handler = instance.compiled.handlers["update"]
    return _run_handler(instance, "update", {handler.params[0]: float(dt)}, None)


def render(instance: ScriptInstance, should_draw: bool) -> tuple[list, Optional[Diagnostic]]:
    """Run the draw handler and collect its commands in call order.

    With should_draw False the body is skipped entirely.  A failing draw
    yields ([], diagnostic) and leaves both the store and last_commands
    untouched.
    """
    if not should_draw:
        return [], None
    sink: list = []
    diag = _run_handler(instance, "draw", {}, sink)
    if diag is not None:
        return [], diag
    instance.last_commands = tuple(sink)
    return sink, None
