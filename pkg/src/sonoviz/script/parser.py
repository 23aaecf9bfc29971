"""Recursive-descent parser producing a Module AST plus syntax diagnostics.

Parsing never raises on bad input: errors are collected as E_SYNTAX
diagnostics and the parser resynchronizes at the next statement boundary,
so one typo does not mask every later problem.
"""

from __future__ import annotations

from sonoviz.script import ast_nodes as ast
from sonoviz.script.diagnostics import E_SYNTAX, Diagnostic, error
from sonoviz.script.lexer import (
    EOF,
    IDENT,
    KEYWORD,
    NEWLINE,
    NUMBER,
    OP,
    STRING,
    LexError,
    Token,
    tokenize,
)


class _ParseFault(Exception):
    """Internal signal: a diagnostic was recorded, resync and continue."""


class Parser:
    def __init__(self, text: str):
        self.diagnostics: list[Diagnostic] = []
        try:
            self.tokens = tokenize(text)
        except LexError as exc:
            self.diagnostics.append(exc.diagnostic)
            self.tokens = [Token(EOF, "", 1, 1)]
        self.pos = 0

    # -- token helpers -------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != EOF:
            self.pos += 1
        return tok

    def check(self, type_: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.type == type_ and (value is None or tok.value == value)

    def match(self, type_: str, value: str | None = None) -> Token | None:
        if self.check(type_, value):
            return self.advance()
        return None

    def expect(self, type_: str, value: str | None = None, what: str = "") -> Token:
        tok = self.peek()
        if self.check(type_, value):
            return self.advance()
        expected = what or (value if value else type_.lower())
        found = tok.value if tok.value else "end of file"
        self.fail(tok, f"expected {expected}, found {found!r}")

    def fail(self, tok: Token, message: str):
        self.diagnostics.append(error(E_SYNTAX, tok.line, tok.col, message))
        raise _ParseFault()

    def skip_newlines(self):
        while self.check(NEWLINE) or self.check(OP, ";"):
            self.advance()

    def end_statement(self):
        """A statement ends at newline, ';', '}', or EOF."""
        if self.check(NEWLINE) or self.check(OP, ";"):
            self.advance()
            return
        if self.check(OP, "}") or self.check(EOF):
            return
        self.fail(self.peek(), "expected end of statement")

    def resync(self, *, in_block: bool):
        """Skip forward to the next statement boundary after an error."""
        depth = 0
        while not self.check(EOF):
            tok = self.peek()
            if tok.type == OP and tok.value == "{":
                depth += 1
            elif tok.type == OP and tok.value == "}":
                if depth == 0:
                    return  # let the block parser consume it
                depth -= 1
            elif tok.type == NEWLINE and depth == 0:
                self.advance()
                return
            self.advance()

    # -- top level ------------------------------------------------------

    def parse_module(self) -> ast.Module:
        titles: list[ast.TitleDecl] = []
        lets: list[ast.LetDecl] = []
        handlers: list[ast.HandlerDecl] = []
        self.skip_newlines()
        while not self.check(EOF):
            try:
                tok = self.peek()
                if self.check(KEYWORD, "title"):
                    titles.append(self.parse_title())
                elif self.check(KEYWORD, "let"):
                    lets.append(self.parse_let())
                elif self.check(KEYWORD, "fn"):
                    handlers.append(self.parse_handler())
                else:
                    self.fail(tok, "expected 'title', 'let', or 'fn' at top level")
            except _ParseFault:
                self.resync(in_block=False)
                if self.check(OP, "}"):
                    self.advance()
            self.skip_newlines()
        end = self.peek()
        return ast.Module(
            titles=tuple(titles),
            lets=tuple(lets),
            handlers=tuple(handlers),
            end_line=end.line,
            end_col=max(1, end.col),
        )

    def parse_title(self) -> ast.TitleDecl:
        kw = self.expect(KEYWORD, "title")
        value = self.expect(STRING, what="title string")
        self.end_statement()
        return ast.TitleDecl(value=value.value, line=kw.line, col=kw.col)

    def parse_let(self) -> ast.LetDecl:
        kw = self.expect(KEYWORD, "let")
        name = self.expect(IDENT, what="variable name")
        init = None
        if self.match(OP, "="):
            init = self.parse_expr()
        self.end_statement()
        return ast.LetDecl(name=name.value, init=init, line=kw.line, col=kw.col)

    def parse_handler(self) -> ast.HandlerDecl:
        kw = self.expect(KEYWORD, "fn")
        name = self.expect(IDENT, what="handler name")
        self.expect(OP, "(")
        params: list[str] = []
        if not self.check(OP, ")"):
            while True:
                params.append(self.expect(IDENT, what="parameter name").value)
                if not self.match(OP, ","):
                    break
        self.expect(OP, ")")
        body = self.parse_block()
        return ast.HandlerDecl(
            name=name.value, params=tuple(params), body=body, line=kw.line, col=kw.col
        )

    # -- statements -----------------------------------------------------

    def parse_block(self) -> tuple[ast.Stmt, ...]:
        self.skip_newlines()
        self.expect(OP, "{")
        stmts: list[ast.Stmt] = []
        self.skip_newlines()
        while not self.check(OP, "}") and not self.check(EOF):
            try:
                stmts.append(self.parse_stmt())
            except _ParseFault:
                self.resync(in_block=True)
            self.skip_newlines()
        self.expect(OP, "}")
        return tuple(stmts)

    def parse_stmt(self) -> ast.Stmt:
        tok = self.peek()
        if self.check(KEYWORD, "if"):
            return self.parse_if()
        if self.check(KEYWORD, "for"):
            return self.parse_for()
        if self.check(KEYWORD, "while"):
            return self.parse_while()
        if self.check(KEYWORD, "let"):
            self.fail(tok, "'let' is only allowed at the top level")
        if tok.type == IDENT and self.tokens[self.pos + 1].type == OP and self.tokens[
            self.pos + 1
        ].value == "=":
            name = self.advance()
            self.advance()  # '='
            value = self.parse_expr()
            self.end_statement()
            return ast.Assign(target=name.value, value=value, line=name.line, col=name.col)
        expr = self.parse_expr()
        self.end_statement()
        return ast.ExprStmt(expr=expr, line=tok.line, col=tok.col)

    def parse_if(self) -> ast.If:
        kw = self.expect(KEYWORD, "if")
        cond = self.parse_expr()
        then_body = self.parse_block()
        else_body: tuple[ast.Stmt, ...] = ()
        save = self.pos
        self.skip_newlines()
        if self.check(KEYWORD, "else"):
            self.advance()
            if self.check(KEYWORD, "if"):
                else_body = (self.parse_if(),)
            else:
                else_body = self.parse_block()
        else:
            self.pos = save
        return ast.If(
            cond=cond, then_body=then_body, else_body=else_body, line=kw.line, col=kw.col
        )

    def parse_for(self) -> ast.ForRange:
        kw = self.expect(KEYWORD, "for")
        var = self.expect(IDENT, what="loop variable")
        self.expect(KEYWORD, "in")
        start = self.parse_expr()
        self.expect(OP, "..", what="'..' range")
        stop = self.parse_expr()
        body = self.parse_block()
        return ast.ForRange(
            var=var.value, start=start, stop=stop, body=body, line=kw.line, col=kw.col
        )

    def parse_while(self) -> ast.While:
        kw = self.expect(KEYWORD, "while")
        cond = self.parse_expr()
        body = self.parse_block()
        return ast.While(cond=cond, body=body, line=kw.line, col=kw.col)

    # -- expressions ----------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        return self.parse_or()

    def parse_or(self) -> ast.Expr:
        left = self.parse_and()
        while self.check(OP, "||"):
            op = self.advance()
            right = self.parse_and()
            left = ast.Binary("||", left, right, op.line, op.col)
        return left

    def parse_and(self) -> ast.Expr:
        left = self.parse_equality()
        while self.check(OP, "&&"):
            op = self.advance()
            right = self.parse_equality()
            left = ast.Binary("&&", left, right, op.line, op.col)
        return left

    def parse_equality(self) -> ast.Expr:
        left = self.parse_comparison()
        while self.check(OP, "==") or self.check(OP, "!="):
            op = self.advance()
            right = self.parse_comparison()
            left = ast.Binary(op.value, left, right, op.line, op.col)
        return left

    def parse_comparison(self) -> ast.Expr:
        left = self.parse_additive()
        while (
            self.check(OP, "<")
            or self.check(OP, "<=")
            or self.check(OP, ">")
            or self.check(OP, ">=")
        ):
            op = self.advance()
            right = self.parse_additive()
            left = ast.Binary(op.value, left, right, op.line, op.col)
        return left

    def parse_additive(self) -> ast.Expr:
        left = self.parse_multiplicative()
        while self.check(OP, "+") or self.check(OP, "-"):
            op = self.advance()
            right = self.parse_multiplicative()
            left = ast.Binary(op.value, left, right, op.line, op.col)
        return left

    def parse_multiplicative(self) -> ast.Expr:
        left = self.parse_unary()
        while self.check(OP, "*") or self.check(OP, "/") or self.check(OP, "%"):
            op = self.advance()
            right = self.parse_unary()
            left = ast.Binary(op.value, left, right, op.line, op.col)
        return left

    def parse_unary(self) -> ast.Expr:
        if self.check(OP, "-") or self.check(OP, "!"):
            op = self.advance()
            operand = self.parse_unary()
            return ast.Unary(op.value, operand, op.line, op.col)
        return self.parse_postfix()

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_primary()
        while True:
            if self.check(OP, "("):
                open_ = self.advance()
                args = self.parse_args(")")
                # only `name(...)` and `draw.name(...)` are callable
                if isinstance(expr, ast.Name):
                    expr = ast.Call(expr.ident, args, False, expr.line, expr.col)
                elif (
                    isinstance(expr, ast.Member)
                    and isinstance(expr.base, ast.Name)
                    and expr.base.ident == "draw"
                ):
                    expr = ast.Call(expr.field, args, True, expr.base.line, expr.base.col)
                else:
                    self.fail(open_, "only named functions can be called")
            elif self.check(OP, "."):
                dot = self.advance()
                field = self.expect(IDENT, what="field name")
                expr = ast.Member(expr, field.value, dot.line, dot.col)
            elif self.check(OP, "["):
                open_ = self.advance()
                index = self.parse_expr()
                self.expect(OP, "]")
                expr = ast.Index(expr, index, open_.line, open_.col)
            else:
                return expr

    def parse_args(self, closer: str) -> tuple[ast.Expr, ...]:
        args: list[ast.Expr] = []
        if not self.check(OP, closer):
            while True:
                args.append(self.parse_expr())
                if not self.match(OP, ","):
                    break
        self.expect(OP, closer)
        return tuple(args)

    def parse_primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.type == NUMBER:
            self.advance()
            return ast.NumberLit(float(tok.value), tok.line, tok.col)
        if tok.type == STRING:
            self.advance()
            return ast.StringLit(tok.value, tok.line, tok.col)
        if tok.type == KEYWORD and tok.value in ("true", "false"):
            self.advance()
            return ast.BoolLit(tok.value == "true", tok.line, tok.col)
        if tok.type == IDENT:
            self.advance()
            return ast.Name(tok.value, tok.line, tok.col)
        if tok.type == OP and tok.value == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect(OP, ")")
            return expr
        if tok.type == OP and tok.value == "[":
            self.advance()
            items = self.parse_args("]")
            return ast.ListLit(items, tok.line, tok.col)
        found = tok.value if tok.value else "end of file"
        self.fail(tok, f"expected an expression, found {found!r}")


def parse(text: str) -> tuple[ast.Module, list[Diagnostic]]:
    parser = Parser(text)
    module = parser.parse_module()
    return module, parser.diagnostics
