"""Recursive-descent parser producing :mod:`newton.frontend.nodes` trees.

Precedence, loosest to tightest: relational, ``+ -``, ``* /``, unary minus,
``**`` (right-associative), ``@``, parentheses.
"""

from __future__ import annotations

from newton.diagnostics import Diagnostic, ParseError, SourceSpan
from newton.frontend.lexer import RELATIONAL_OPS, Token, TokenKind, tokenize
from newton.frontend.nodes import (
    BinOp,
    ConstantDecl,
    Decl,
    Expr,
    Index,
    IndexRange,
    InvariantDecl,
    Name,
    Neg,
    Number,
    Param,
    Relation,
    SignalDecl,
    UnitName,
)

_DECL_KEYWORDS = ("signal", "constant", "invariant")
_SIGNAL_FIELDS = ("name", "symbol", "derivation")
# A missing closer is reported where it should have been, not at the next line.
_CLOSERS = frozenset({";", "}", ")", ","})


class _Abort(Exception):
    """Unwinds to the declaration loop after an error has been recorded."""


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: list[Diagnostic] = []

    # -- token helpers -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, lexeme: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_(lexeme)

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def previous_end(self) -> SourceSpan | None:
        if self.pos == 0:
            return None
        s = self.tokens[self.pos - 1].span
        return SourceSpan(s.file, s.line_end, s.col_end, s.line_end, s.col_end)

    def fail(self, expected: str, closers: tuple[str, ...] = ()) -> None:
        tok = self.peek()
        found = f"{tok.lexeme!r}" if tok is not None else "end of input"
        span = tok.span if tok is not None else self.previous_end()
        prev = self.previous_end()
        if prev is not None and (
            tok is None or (closers and tok.span.line_start > prev.line_start)
        ):
            span = prev
        if span is None:
            span = SourceSpan("<input>", 1, 1, 1, 1)
        self.errors.append(Diagnostic("ParseError", f"expected {expected}, found {found}", span))
        raise _Abort

    def expect(self, lexeme: str, expected: str | None = None) -> Token:
        if self.at(lexeme):
            return self.advance()
        closers = (lexeme,) if lexeme in _CLOSERS else ()
        self.fail(expected or f"'{lexeme}'", closers)

    def expect_kind(self, kind: TokenKind, expected: str) -> Token:
        tok = self.peek()
        if tok is not None and tok.kind is kind:
            return self.advance()
        self.fail(expected)

    def expect_word(self, word: str) -> Token:
        """Contextual keyword: an identifier spelled ``word``."""
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.IDENTIFIER and tok.lexeme == word:
            return self.advance()
        self.fail(f"'{word}'")

    # -- declarations ------------------------------------------------------

    def parse(self) -> list[Decl]:
        decls: list[Decl] = []
        while self.peek() is not None:
            start = self.pos
            try:
                decls.append(self.declaration())
            except _Abort:
                self.synchronize(start)
        if self.errors:
            raise ParseError(self.errors)
        return decls

    def synchronize(self, start: int) -> None:
        """Skip to the next ``identifier : signal|constant|invariant``."""
        self.pos = max(self.pos, start + 1)
        while self.pos < len(self.tokens):
            t0, t1, t2 = self.peek(), self.peek(1), self.peek(2)
            if (
                t0.kind is TokenKind.IDENTIFIER
                and t1 is not None
                and t1.is_(":")
                and t2 is not None
                and t2.kind is TokenKind.KEYWORD
                and t2.lexeme in _DECL_KEYWORDS
            ):
                return
            self.pos += 1

    def declaration(self) -> Decl:
        name = self.expect_kind(TokenKind.IDENTIFIER, "a declaration name")
        self.expect(":")
        tok = self.peek()
        if tok is not None and tok.is_("signal"):
            return self.signal_decl(name)
        if tok is not None and tok.is_("constant"):
            return self.constant_decl(name)
        if tok is not None and tok.is_("invariant"):
            return self.invariant_decl(name)
        self.fail("'signal', 'constant' or 'invariant'")

    def signed_int(self) -> int:
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        tok = self.expect_kind(TokenKind.INTEGER, "an integer")
        return -int(tok.lexeme) if negative else int(tok.lexeme)

    def signal_decl(self, name: Token) -> SignalDecl:
        self.advance()
        index_range = None
        if self.at("("):
            self.advance()
            var = self.expect_kind(TokenKind.IDENTIFIER, "an index variable")
            self.expect(":")
            lo = self.signed_int()
            self.expect_word("to")
            hi = self.signed_int()
            self.expect(")")
            index_range = IndexRange(var.lexeme, lo, hi)
        self.expect("=")
        self.expect("{")
        fields: dict[str, object] = {}
        while not self.at("}"):
            tok = self.peek()
            if tok is None or tok.kind is not TokenKind.IDENTIFIER or tok.lexeme not in _SIGNAL_FIELDS:
                self.fail("'name', 'symbol', 'derivation' or '}'", ("}",))
            if tok.lexeme in fields:
                self.errors.append(
                    Diagnostic("ParseError", f"duplicate field {tok.lexeme!r}", tok.span)
                )
                raise _Abort
            self.advance()
            self.expect("=")
            if tok.lexeme == "name":
                text = self.expect_kind(TokenKind.STRING, "a string literal").string_value
                language = None
                nxt = self.peek()
                if nxt is not None and nxt.kind is TokenKind.IDENTIFIER:
                    language = self.advance().lexeme
                fields["name"] = UnitName(text, language)
            elif tok.lexeme == "symbol":
                fields["symbol"] = self.expect_kind(TokenKind.IDENTIFIER, "a unit symbol").lexeme
            elif self.at("none"):
                self.advance()
                fields["derivation"] = None
            else:
                fields["derivation"] = self.expression()
            self.expect(";")
        close = self.advance()
        if "derivation" not in fields:
            self.errors.append(
                Diagnostic(
                    "ParseError",
                    f"signal {name.lexeme!r} has no derivation field",
                    close.span,
                )
            )
            raise _Abort
        return SignalDecl(
            name.lexeme,
            index_range,
            fields.get("name"),
            fields.get("symbol"),
            fields["derivation"],
            span=name.span.to(close.span),
        )

    def constant_decl(self, name: Token) -> ConstantDecl:
        self.advance()
        self.expect("=")
        value = self.expression()
        end = self.expect(";")
        return ConstantDecl(name.lexeme, value, span=name.span.to(end.span))

    def invariant_decl(self, name: Token) -> InvariantDecl:
        self.advance()
        self.expect("(")
        params: list[Param] = []
        if not self.at(")"):
            while True:
                pname = self.expect_kind(TokenKind.IDENTIFIER, "a parameter name")
                self.expect(":")
                ptype = self.expect_kind(TokenKind.IDENTIFIER, "a signal type name")
                params.append(Param(pname.lexeme, ptype.lexeme, span=pname.span.to(ptype.span)))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")", "',' or ')'")
        self.expect("=")
        self.expect("{")
        body = [self.relation()]
        while self.at(","):
            self.advance()
            body.append(self.relation())
        close = self.expect("}", "',' or '}'")
        return InvariantDecl(name.lexeme, tuple(params), tuple(body), span=name.span.to(close.span))

    # -- expressions -------------------------------------------------------

    def relation(self) -> Relation:
        lhs = self.expression()
        tok = self.peek()
        if tok is None or tok.kind is not TokenKind.OPERATOR or tok.lexeme not in RELATIONAL_OPS:
            self.fail("a relational operator (~ < <= > >= ==)")
        op = self.advance().lexeme
        rhs = self.expression()
        return Relation(lhs, op, rhs, span=lhs.span.to(rhs.span))

    def expression(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().lexeme
            right = self.term()
            left = BinOp(op, left, right, span=left.span.to(right.span))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().lexeme
            right = self.unary()
            left = BinOp(op, left, right, span=left.span.to(right.span))
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            minus = self.advance()
            operand = self.unary()
            return Neg(operand, span=minus.span.to(operand.span))
        return self.power()

    def power(self) -> Expr:
        base = self.postfix()
        if self.at("**"):
            self.advance()
            exponent = self.unary()
            return BinOp("**", base, exponent, span=base.span.to(exponent.span))
        return base

    def postfix(self) -> Expr:
        base = self.primary()
        if self.at("@"):
            at = self.advance()
            if not isinstance(base, Name):
                self.errors.append(
                    Diagnostic("ParseError", "only a signal name can be indexed with '@'", at.span)
                )
                raise _Abort
            tok = self.peek()
            if tok is not None and tok.kind is TokenKind.IDENTIFIER:
                index: Name | Number = Name(tok.lexeme, span=tok.span)
            elif tok is not None and tok.kind is TokenKind.INTEGER:
                index = Number(tok.lexeme, span=tok.span)
            else:
                self.fail("an index variable or integer after '@'")
            self.advance()
            return Index(base, index, span=base.span.to(tok.span))
        return base

    def primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            self.fail("an expression")
        if tok.kind in (TokenKind.INTEGER, TokenKind.REAL):
            self.advance()
            return Number(tok.lexeme, span=tok.span)
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            return Name(tok.lexeme, span=tok.span)
        if tok.is_("("):
            self.advance()
            inner = self.expression()
            self.expect(")")
            return inner
        self.fail("an expression")


def parse(tokens: list[Token]) -> list[Decl]:
    """Parse a token list into declarations.

    Raises ParseError carrying every recoverable error; recovery resumes at
    the next top-level declaration.
    """
    return Parser(tokens).parse()


def parse_source(source: str, file_name: str = "<input>") -> list[Decl]:
    return parse(tokenize(source, file_name))


def parse_expression(source: str, file_name: str = "<expr>") -> Expr:
    """Parse a single expression (no trailing tokens allowed)."""
    p = Parser(tokenize(source, file_name))
    try:
        e = p.expression()
        if p.peek() is not None:
            p.fail("end of expression")
    except _Abort:
        raise ParseError(p.errors) from None
    return e
