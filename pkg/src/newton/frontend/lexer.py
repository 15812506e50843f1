"""Tokenizer for Newton source text."""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum

from newton.diagnostics import LexError, SourceSpan

KEYWORDS = frozenset({"signal", "constant", "invariant", "none"})

RELATIONAL_OPS = ("~", "<=", ">=", "==", "<", ">")
OPERATORS = frozenset({"**", "*", "/", "+", "-", "@", *RELATIONAL_OPS})
PUNCTUATION = frozenset({":", ";", ",", "=", "(", ")", "{", "}"})


class TokenKind(Enum):
    IDENTIFIER = "identifier"
    INTEGER = "integer-literal"
    REAL = "real-literal"
    STRING = "string-literal"
    KEYWORD = "keyword"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: SourceSpan

    def is_(self, lexeme: str) -> bool:
        """True for an operator, punctuation or keyword token spelled ``lexeme``."""
        return self.lexeme == lexeme and self.kind in (
            TokenKind.OPERATOR,
            TokenKind.PUNCTUATION,
            TokenKind.KEYWORD,
        )

    @property
    def string_value(self) -> str:
        if self.kind is not TokenKind.STRING:
            raise ValueError(f"{self.kind.value} token has no string value")
        return re.sub(r"\\(.)", r"\1", self.lexeme[1:-1])

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.lexeme!r}, {self.span})"


# Order matters: longer operators before their prefixes, reals before integers.
_TOKEN_RE = re.compile(
    r"""
    (?P<skip>[ \t\r\n\f\v]+|\#[^\n]*)
  | (?P<real>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\[^\n])*")
  | (?P<op>\*\*|<=|>=|==|[*/+\-@~<>])
  | (?P<punct>[:;,=(){}])
    """,
    re.VERBOSE,
)

_UNTERMINATED_STRING = re.compile(r'"(?:[^"\\\n]|\\[^\n])*')

_KIND_BY_GROUP = {
    "real": TokenKind.REAL,
    "int": TokenKind.INTEGER,
    "string": TokenKind.STRING,
    "op": TokenKind.OPERATOR,
    "punct": TokenKind.PUNCTUATION,
}


class _LineIndex:
    def __init__(self, source: str):
        self.starts = [0] + [m.end() for m in re.finditer("\n", source)]

    def position(self, offset: int) -> tuple[int, int]:
        line = bisect_right(self.starts, offset)
        return line, offset - self.starts[line - 1] + 1


def make_span(index: _LineIndex, file_name: str, start: int, end: int) -> SourceSpan:
    """Span for ``source[start:end]`` (``end`` exclusive, at least one char)."""
    line_start, col_start = index.position(start)
    line_end, col_end = index.position(max(start, end - 1))
    return SourceSpan(file_name, line_start, col_start, line_end, col_end)


def tokenize(source: str, file_name: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace and ``#`` comments.

    Raises LexError at the first illegal character or unterminated string.
    """
    index = _LineIndex(source)
    tokens: list[Token] = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            if source[pos] == '"':
                bad = _UNTERMINATED_STRING.match(source, pos)
                raise LexError(
                    "unterminated string literal", make_span(index, file_name, pos, bad.end())
                )
            raise LexError(
                f"illegal character {source[pos]!r}", make_span(index, file_name, pos, pos + 1)
            )
        group = m.lastgroup
        if group != "skip":
            lexeme = m.group()
            if group == "ident":
                kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENTIFIER
            else:
                kind = _KIND_BY_GROUP[group]
            tokens.append(Token(kind, lexeme, make_span(index, file_name, m.start(), m.end())))
        pos = m.end()
    return tokens
