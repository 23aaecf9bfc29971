"""Tokenizer for shape-script source text.

Statements are newline-terminated; newlines inside (), [] pairs are
insignificant so call arguments can wrap.  Every token carries its
1-based line/column for diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

from sonoviz.script.diagnostics import E_SYNTAX, Diagnostic, error

KEYWORDS = {
    "title",
    "let",
    "fn",
    "if",
    "else",
    "for",
    "in",
    "while",
    "true",
    "false",
}

# token types
NEWLINE = "NEWLINE"
IDENT = "IDENT"
KEYWORD = "KEYWORD"
NUMBER = "NUMBER"
STRING = "STRING"
OP = "OP"
EOF = "EOF"

_TWO_CHAR_OPS = {"==", "!=", "<=", ">=", "&&", "||", ".."}
_ONE_CHAR_OPS = set("()[]{},.=<>+-*/%!;")


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    line: int
    col: int

    def __repr__(self):
        return f"Token({self.type}, {self.value!r}, {self.line}:{self.col})"


class LexError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    depth = 0  # () / [] nesting; newlines inside are skipped

    def tok(type_: str, value: str, ln: int, cl: int):
        tokens.append(Token(type_, value, ln, cl))

    while i < n:
        ch = text[i]

        if ch == "\n":
            if depth == 0 and tokens and tokens[-1].type != NEWLINE:
                tok(NEWLINE, "\n", line, col)
            i += 1
            line += 1
            col = 1
            continue

        if ch in " \t\r":
            i += 1
            col += 1
            continue

        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue

        start_line, start_col = line, col

        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            # fraction only when the dot is not the start of a `..` range
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tok(NUMBER, text[i:j], start_line, start_col)
            col += j - i
            i = j
            continue

        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tok(KEYWORD if word in KEYWORDS else IDENT, word, start_line, start_col)
            col += j - i
            i = j
            continue

        if ch == '"':
            j = i + 1
            out = []
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise LexError(
                        error(E_SYNTAX, start_line, start_col, "unterminated string")
                    )
                if text[j] == "\\":
                    if j + 1 >= n:
                        break
                    esc = text[j + 1]
                    mapped = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc)
                    if mapped is None:
                        raise LexError(
                            error(
                                E_SYNTAX,
                                line,
                                col + (j - i),
                                f"unknown escape sequence '\\{esc}'",
                            )
                        )
                    out.append(mapped)
                    j += 2
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                raise LexError(
                    error(E_SYNTAX, start_line, start_col, "unterminated string")
                )
            tok(STRING, "".join(out), start_line, start_col)
            col += j + 1 - i
            i = j + 1
            continue

        two = text[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tok(OP, two, start_line, start_col)
            i += 2
            col += 2
            continue

        if ch in _ONE_CHAR_OPS:
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth = max(0, depth - 1)
            tok(OP, ch, start_line, start_col)
            i += 1
            col += 1
            continue

        raise LexError(error(E_SYNTAX, line, col, f"unexpected character {ch!r}"))

    if tokens and tokens[-1].type != NEWLINE:
        tok(NEWLINE, "\n", line, col)
    tok(EOF, "", line, col)
    return tokens
