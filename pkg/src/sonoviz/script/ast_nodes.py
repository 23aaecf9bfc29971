"""AST node definitions for shape-script.

Every node keeps the (line, col) of the token that introduced it so both
static checks and runtime faults can point into the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class NumberLit:
    value: float
    line: int
    col: int


@dataclass(frozen=True)
class StringLit:
    value: str
    line: int
    col: int


@dataclass(frozen=True)
class BoolLit:
    value: bool
    line: int
    col: int


@dataclass(frozen=True)
class ListLit:
    items: tuple["Expr", ...]
    line: int
    col: int


@dataclass(frozen=True)
class Name:
    ident: str
    line: int
    col: int


@dataclass(frozen=True)
class Unary:
    op: str  # '-' or '!'
    operand: "Expr"
    line: int
    col: int


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    line: int
    col: int


@dataclass(frozen=True)
class Call:
    """Builtin call `name(args)` or draw primitive `draw.name(args)`."""

    func: str
    args: tuple["Expr", ...]
    is_draw: bool
    line: int
    col: int


@dataclass(frozen=True)
class Member:
    base: "Expr"
    field: str
    line: int
    col: int


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"
    line: int
    col: int


Expr = Union[NumberLit, StringLit, BoolLit, ListLit, Name, Unary, Binary, Call, Member, Index]


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    line: int
    col: int


@dataclass(frozen=True)
class If:
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...]
    line: int
    col: int


@dataclass(frozen=True)
class ForRange:
    var: str
    start: Expr
    stop: Expr
    body: tuple["Stmt", ...]
    line: int
    col: int


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    line: int
    col: int


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    line: int
    col: int


Stmt = Union[Assign, If, ForRange, While, ExprStmt]


@dataclass(frozen=True)
class LetDecl:
    name: str
    init: Optional[Expr]  # None = missing initializer (rejected by checks)
    line: int
    col: int


@dataclass(frozen=True)
class HandlerDecl:
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    line: int
    col: int


@dataclass(frozen=True)
class TitleDecl:
    value: str
    line: int
    col: int


@dataclass(frozen=True)
class Module:
    titles: tuple[TitleDecl, ...]
    lets: tuple[LetDecl, ...]
    handlers: tuple[HandlerDecl, ...]
    end_line: int = 1
    end_col: int = 1
