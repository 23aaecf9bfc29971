"""Static verification of a parsed script.

Catches the whole class of mistakes the repair loop feeds back to the
code-fixing agent: missing handlers, uninitialized or undefined
variables, unknown draw primitives, wrong arities, statically-visible
kind mismatches, and handler-to-handler calls.  Kind inference is
deliberately conservative: a diagnostic fires only when a kind is known
for certain, so valid scripts are never rejected.
"""

from __future__ import annotations

from typing import Optional

from sonoviz.script import ast_nodes as ast
from sonoviz.script.diagnostics import (
    E_ARITY,
    E_DUPLICATE,
    E_MISSING_HANDLER,
    E_MISSING_TITLE,
    E_RECURSION,
    E_TYPE,
    E_UNDEFINED_VAR,
    E_UNINITIALIZED_VAR,
    E_UNKNOWN_HANDLER,
    E_UNKNOWN_PRIMITIVE,
    W_SIZE_RANGE,
    Diagnostic,
    error,
    warning,
)
from sonoviz.script.signatures import (
    BUILTIN_CONSTANTS,
    BUILTIN_SIGNATURES,
    DRAW_SIGNATURES,
    HANDLER_ARITIES,
    RECT_LITERAL_SIZE_RANGE,
    RESERVED_NAMES,
)
from sonoviz.script.values import (
    KIND_BOOL,
    KIND_COLOR,
    KIND_LIST,
    KIND_NUMBER,
    KIND_STRING,
    KIND_VEC2,
)

# positional parameter kinds handed to each handler by the engine
HANDLER_PARAM_KINDS = {
    "on_sound": (KIND_STRING, KIND_NUMBER, KIND_NUMBER),
    "update": (KIND_NUMBER,),
    "draw": (),
}

_MEMBER_FIELDS = {
    KIND_VEC2: {"x", "y"},
    KIND_COLOR: {"r", "g", "b", "a"},
}


class Checker:
    def __init__(self, module: ast.Module):
        self.module = module
        self.diagnostics: list[Diagnostic] = []
        self.var_kinds: dict[str, Optional[str]] = {}

    def err(self, code: str, node, message: str):
        self.diagnostics.append(error(code, node.line, node.col, message))

    def warn(self, code: str, node, message: str):
        self.diagnostics.append(warning(code, node.line, node.col, message))

    # -- module shape ---------------------------------------------------

    def run(self) -> list[Diagnostic]:
        self.check_titles()
        self.check_lets()
        self.check_handlers()
        return self.diagnostics

    def check_titles(self):
        titles = self.module.titles
        if not titles:
            self.diagnostics.append(
                error(
                    E_MISSING_TITLE,
                    self.module.end_line,
                    self.module.end_col,
                    'script has no title declaration; add title "..." at the top',
                )
            )
        for extra in titles[1:]:
            self.err(E_DUPLICATE, extra, "title is declared more than once")
        for t in titles:
            if not t.value.strip():
                self.err(E_TYPE, t, "title must not be empty")

    def check_lets(self):
        for let in self.module.lets:
            if let.name in RESERVED_NAMES:
                self.err(
                    E_DUPLICATE, let, f"'{let.name}' is a reserved name and cannot be a variable"
                )
                continue
            if let.name in self.var_kinds:
                self.err(E_DUPLICATE, let, f"variable '{let.name}' is declared twice")
                continue
            if let.init is None:
                self.err(
                    E_UNINITIALIZED_VAR,
                    let,
                    f"variable '{let.name}' has no default value; write let {let.name} = ...",
                )
                self.var_kinds[let.name] = None
                continue
            # earlier variables are visible to later defaults
            kind = self.check_expr(let.init, dict(self.var_kinds), in_draw=False)
            self.var_kinds[let.name] = kind

    def check_handlers(self):
        seen: dict[str, ast.HandlerDecl] = {}
        for handler in self.module.handlers:
            if handler.name not in HANDLER_ARITIES:
                self.err(
                    E_UNKNOWN_HANDLER,
                    handler,
                    f"unknown handler '{handler.name}'; only "
                    "on_sound, update, and draw exist",
                )
                continue
            if handler.name in seen:
                self.err(E_DUPLICATE, handler, f"handler '{handler.name}' is defined twice")
                continue
            seen[handler.name] = handler
            expected = HANDLER_ARITIES[handler.name]
            if len(handler.params) != expected:
                self.err(
                    E_ARITY,
                    handler,
                    f"{handler.name} takes exactly {expected} parameter(s), "
                    f"found {len(handler.params)}",
                )
            self.check_params(handler)
            self.check_body(handler)
        for name in HANDLER_ARITIES:
            if name not in seen:
                self.diagnostics.append(
                    error(
                        E_MISSING_HANDLER,
                        self.module.end_line,
                        self.module.end_col,
                        f"required handler '{name}' is missing",
                    )
                )

    def check_params(self, handler: ast.HandlerDecl):
        used = set()
        for p in handler.params:
            if p in RESERVED_NAMES:
                self.err(E_DUPLICATE, handler, f"parameter '{p}' shadows a reserved name")
            elif p in self.var_kinds:
                self.err(E_DUPLICATE, handler, f"parameter '{p}' shadows variable '{p}'")
            elif p in used:
                self.err(E_DUPLICATE, handler, f"duplicate parameter '{p}'")
            used.add(p)

    # -- statement / expression walk -------------------------------------

    def check_body(self, handler: ast.HandlerDecl):
        env: dict[str, Optional[str]] = dict(self.var_kinds)
        param_kinds = HANDLER_PARAM_KINDS.get(handler.name, ())
        for i, p in enumerate(handler.params):
            env[p] = param_kinds[i] if i < len(param_kinds) else None
        self.check_block(handler.body, env, in_draw=handler.name == "draw")

    def check_block(self, stmts, env: dict, in_draw: bool):
        for stmt in stmts:
            self.check_stmt(stmt, env, in_draw)

    def check_stmt(self, stmt, env: dict, in_draw: bool):
        if isinstance(stmt, ast.Assign):
            kind = self.check_expr(stmt.value, env, in_draw)
            if stmt.target in RESERVED_NAMES:
                self.err(E_UNDEFINED_VAR, stmt, f"cannot assign to builtin '{stmt.target}'")
            elif stmt.target not in env:
                self.err(
                    E_UNDEFINED_VAR,
                    stmt,
                    f"assignment to undeclared variable '{stmt.target}'; "
                    "declare it with let at the top level",
                )
            else:
                env[stmt.target] = kind
        elif isinstance(stmt, ast.If):
            cond = self.check_expr(stmt.cond, env, in_draw)
            if cond is not None and cond != KIND_BOOL:
                self.err(E_TYPE, stmt, f"if condition must be a boolean, found {cond}")
            then_env = dict(env)
            else_env = dict(env)
            self.check_block(stmt.then_body, then_env, in_draw)
            self.check_block(stmt.else_body, else_env, in_draw)
            self.merge_env(env, then_env, else_env)
        elif isinstance(stmt, ast.ForRange):
            for bound in (stmt.start, stmt.stop):
                kind = self.check_expr(bound, env, in_draw)
                if kind is not None and kind != KIND_NUMBER:
                    self.err(E_TYPE, stmt, f"range bounds must be numbers, found {kind}")
            if stmt.var in RESERVED_NAMES:
                self.err(E_DUPLICATE, stmt, f"loop variable '{stmt.var}' shadows a reserved name")
            elif stmt.var in env:
                self.err(E_DUPLICATE, stmt, f"loop variable '{stmt.var}' shadows '{stmt.var}'")
            body_env = dict(env)
            body_env[stmt.var] = KIND_NUMBER
            self.check_block(stmt.body, body_env, in_draw)
            body_env.pop(stmt.var, None)
            self.merge_env(env, env, body_env)
        elif isinstance(stmt, ast.While):
            cond = self.check_expr(stmt.cond, env, in_draw)
            if cond is not None and cond != KIND_BOOL:
                self.err(E_TYPE, stmt, f"while condition must be a boolean, found {cond}")
            body_env = dict(env)
            self.check_block(stmt.body, body_env, in_draw)
            self.merge_env(env, env, body_env)
        elif isinstance(stmt, ast.ExprStmt):
            self.check_expr(stmt.expr, env, in_draw, as_statement=True)

    @staticmethod
    def merge_env(target: dict, a: dict, b: dict):
        """Join two branch environments: kinds that disagree become unknown."""
        for name in target:
            ka, kb = a.get(name), b.get(name)
            target[name] = ka if ka == kb else None

    # -- expressions ------------------------------------------------------

    def check_expr(self, expr, env: dict, in_draw: bool, as_statement: bool = False):
        """Return the statically-known kind of `expr`, or None when unknown.
        Records diagnostics for definite errors along the way."""
        if isinstance(expr, ast.NumberLit):
            return KIND_NUMBER
        if isinstance(expr, ast.StringLit):
            return KIND_STRING
        if isinstance(expr, ast.BoolLit):
            return KIND_BOOL
        if isinstance(expr, ast.ListLit):
            for item in expr.items:
                self.check_expr(item, env, in_draw)
            return KIND_LIST
        if isinstance(expr, ast.Name):
            return self.check_name(expr, env)
        if isinstance(expr, ast.Unary):
            return self.check_unary(expr, env, in_draw)
        if isinstance(expr, ast.Binary):
            return self.check_binary(expr, env, in_draw)
        if isinstance(expr, ast.Call):
            return self.check_call(expr, env, in_draw, as_statement)
        if isinstance(expr, ast.Member):
            return self.check_member(expr, env, in_draw)
        if isinstance(expr, ast.Index):
            base = self.check_expr(expr.base, env, in_draw)
            if base is not None and base != KIND_LIST:
                self.err(E_TYPE, expr, f"only lists can be indexed, found {base}")
            idx = self.check_expr(expr.index, env, in_draw)
            if idx is not None and idx != KIND_NUMBER:
                self.err(E_TYPE, expr, f"list index must be a number, found {idx}")
            return None
        raise AssertionError(f"unhandled expression node {expr!r}")

    def check_name(self, expr: ast.Name, env: dict):
        name = expr.ident
        if name in BUILTIN_CONSTANTS:
            return KIND_NUMBER
        if name == "draw":
            self.err(E_UNDEFINED_VAR, expr, "'draw' is a namespace; call draw.<primitive>(...)")
            return None
        if name in BUILTIN_SIGNATURES:
            self.err(E_TYPE, expr, f"builtin '{name}' must be called")
            return None
        if name in HANDLER_ARITIES:
            self.err(E_UNDEFINED_VAR, expr, f"'{name}' is a handler, not a value")
            return None
        if name not in env:
            self.err(E_UNDEFINED_VAR, expr, f"undefined variable '{name}'")
            return None
        return env[name]

    def check_unary(self, expr: ast.Unary, env: dict, in_draw: bool):
        kind = self.check_expr(expr.operand, env, in_draw)
        if expr.op == "-":
            if kind in (KIND_NUMBER, KIND_VEC2, None):
                return kind
            self.err(E_TYPE, expr, f"cannot negate a {kind}")
            return None
        # '!'
        if kind in (KIND_BOOL, None):
            return KIND_BOOL if kind else None
        self.err(E_TYPE, expr, f"'!' needs a boolean, found {kind}")
        return None

    _NUMERIC_OPS = {"<", "<=", ">", ">="}

    def check_binary(self, expr: ast.Binary, env: dict, in_draw: bool):
        lk = self.check_expr(expr.left, env, in_draw)
        rk = self.check_expr(expr.right, env, in_draw)
        op = expr.op
        if op in ("==", "!="):
            return KIND_BOOL
        if op in ("&&", "||"):
            for k in (lk, rk):
                if k is not None and k != KIND_BOOL:
                    self.err(E_TYPE, expr, f"'{op}' needs booleans, found {k}")
            return KIND_BOOL
        if op in self._NUMERIC_OPS:
            for k in (lk, rk):
                if k is not None and k != KIND_NUMBER:
                    self.err(E_TYPE, expr, f"'{op}' compares numbers, found {k}")
            return KIND_BOOL
        if lk is None or rk is None:
            return None
        if op in ("+", "-"):
            if lk == rk == KIND_NUMBER:
                return KIND_NUMBER
            if lk == rk == KIND_VEC2:
                return KIND_VEC2
        elif op == "*":
            if lk == rk == KIND_NUMBER:
                return KIND_NUMBER
            if {lk, rk} == {KIND_VEC2, KIND_NUMBER}:
                return KIND_VEC2
        elif op in ("/", "%"):
            if lk == rk == KIND_NUMBER:
                return KIND_NUMBER
            if op == "/" and lk == KIND_VEC2 and rk == KIND_NUMBER:
                return KIND_VEC2
        self.err(E_TYPE, expr, f"'{op}' cannot combine {lk} and {rk}")
        return None

    def check_call(self, expr: ast.Call, env: dict, in_draw: bool, as_statement: bool):
        arg_kinds = [self.check_expr(a, env, in_draw) for a in expr.args]
        if expr.is_draw:
            return self.check_draw_call(expr, arg_kinds, as_statement)
        name = expr.func
        if name in HANDLER_ARITIES:
            self.err(
                E_RECURSION,
                expr,
                f"handlers may not call handlers ('{name}'); the engine invokes them",
            )
            return None
        if name in BUILTIN_CONSTANTS:
            self.err(E_TYPE, expr, f"'{name}' is a constant, not a function")
            return None
        if name not in BUILTIN_SIGNATURES:
            self.err(E_UNDEFINED_VAR, expr, f"unknown function '{name}'")
            return None
        signatures = BUILTIN_SIGNATURES[name]
        arities = {len(sig_args) for sig_args, _ in signatures}
        if len(expr.args) not in arities:
            wanted = " or ".join(str(a) for a in sorted(arities))
            self.err(
                E_ARITY,
                expr,
                f"{name}() takes {wanted} argument(s), found {len(expr.args)}",
            )
            return None
        candidates = [sig for sig in signatures if len(sig[0]) == len(expr.args)]
        # flag only when no candidate signature could accept the known kinds
        viable = [
            sig
            for sig in candidates
            if all(k is None or k == want for k, want in zip(arg_kinds, sig[0]))
        ]
        if not viable:
            expected = " or ".join("(" + ", ".join(sig[0]) + ")" for sig in candidates)
            found = ", ".join(k or "?" for k in arg_kinds)
            self.err(E_TYPE, expr, f"{name}() expects {expected}, found ({found})")
            return None
        if len(viable) == 1:
            return viable[0][1]
        results = {sig[1] for sig in viable}
        return results.pop() if len(results) == 1 else None

    def check_draw_call(self, expr: ast.Call, arg_kinds, as_statement: bool):
        name = expr.func
        if name not in DRAW_SIGNATURES:
            known = ", ".join(sorted(DRAW_SIGNATURES))
            self.err(
                E_UNKNOWN_PRIMITIVE,
                expr,
                f"draw.{name} does not exist; primitives are: {known}",
            )
            return None
        arg_names, kinds = DRAW_SIGNATURES[name]
        if not as_statement:
            self.err(E_TYPE, expr, f"draw.{name}(...) has no value; use it as a statement")
        if len(expr.args) != len(kinds):
            self.err(
                E_ARITY,
                expr,
                f"draw.{name} takes {len(kinds)} arguments "
                f"({', '.join(arg_names)}), found {len(expr.args)}",
            )
            return None
        for i, (got, want) in enumerate(zip(arg_kinds, kinds)):
            if got is not None and got != want:
                self.err(
                    E_TYPE,
                    expr.args[i],
                    f"draw.{name} argument {i + 1} ({arg_names[i]}) "
                    f"must be a {want}, found {got}",
                )
        if name == "rect":
            self.check_rect_literals(expr)
        return None

    def check_rect_literals(self, expr: ast.Call):
        low, high = RECT_LITERAL_SIZE_RANGE
        for i, arg_name in ((1, "width"), (2, "height")):
            if i >= len(expr.args):
                continue
            arg = expr.args[i]
            if isinstance(arg, ast.NumberLit) and not low <= arg.value <= high:
                self.warn(
                    W_SIZE_RANGE,
                    arg,
                    f"rect {arg_name} {arg.value:g} is outside the preferred "
                    f"[{low}, {high}] range",
                )

    def check_member(self, expr: ast.Member, env: dict, in_draw: bool):
        if isinstance(expr.base, ast.Name) and expr.base.ident == "draw":
            self.err(E_TYPE, expr, f"draw.{expr.field} must be called with arguments")
            return None
        base = self.check_expr(expr.base, env, in_draw)
        if base is None:
            return None
        fields = _MEMBER_FIELDS.get(base)
        if fields is None:
            self.err(E_TYPE, expr, f"a {base} has no fields")
            return None
        if expr.field not in fields:
            self.err(
                E_TYPE,
                expr,
                f"a {base} has no field '{expr.field}' (has {', '.join(sorted(fields))})",
            )
            return None
        return KIND_NUMBER


def check_module(module: ast.Module) -> list[Diagnostic]:
    return Checker(module).run()
