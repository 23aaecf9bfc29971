"""Diagnostics: the currency of compilation, the sandbox, and the repair loop."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


# Catalog of stable diagnostic codes.  Compile-time and runtime failures
# always carry one of these; tools may rely on the strings never changing.
E_SYNTAX = "E_SYNTAX"                    # malformed source text
E_MISSING_TITLE = "E_MISSING_TITLE"      # no `title "..."` declaration
E_MISSING_HANDLER = "E_MISSING_HANDLER"  # on_sound/update/draw absent
E_UNKNOWN_HANDLER = "E_UNKNOWN_HANDLER"  # fn other than the three handlers
E_UNINITIALIZED_VAR = "E_UNINITIALIZED_VAR"  # `let x` without `= expr`
E_DUPLICATE = "E_DUPLICATE"              # redeclared variable/handler/title
E_UNDEFINED_VAR = "E_UNDEFINED_VAR"      # unknown identifier or function
E_UNKNOWN_PRIMITIVE = "E_UNKNOWN_PRIMITIVE"  # draw.<name> not in the catalog
E_ARITY = "E_ARITY"                      # wrong argument/parameter count
E_TYPE = "E_TYPE"                        # wrong value kind or invalid argument
E_RECURSION = "E_RECURSION"              # handler invokes a handler
E_BUDGET = "E_BUDGET"                    # evaluation step budget exhausted
W_SIZE_RANGE = "W_SIZE_RANGE"            # literal rect dimension outside [2.5, 5]

CODE_CATALOG = frozenset(
    {
        E_SYNTAX,
        E_MISSING_TITLE,
        E_MISSING_HANDLER,
        E_UNKNOWN_HANDLER,
        E_UNINITIALIZED_VAR,
        E_DUPLICATE,
        E_UNDEFINED_VAR,
        E_UNKNOWN_PRIMITIVE,
        E_ARITY,
        E_TYPE,
        E_RECURSION,
        E_BUDGET,
        W_SIZE_RANGE,
    }
)


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    line: int
    col: int
    message: str

    def __post_init__(self):
        if self.line < 1 or self.col < 1:
            raise ValueError("diagnostic positions are 1-based")

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def format(self) -> str:
        return f"{self.severity.value} {self.code} {self.line}:{self.col} {self.message}"


def error(code: str, line: int, col: int, message: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, line, col, message)


def warning(code: str, line: int, col: int, message: str) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, line, col, message)


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)
