"""Abstract syntax tree for Newton descriptions.

Every node carries a ``span``; spans are excluded from equality so two trees
compare equal when they have the same structure regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from newton.diagnostics import SourceSpan

def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Number:
    text: str
    span: SourceSpan | None = _span()

    @property
    def is_integer(self) -> bool:
        return self.text.isdigit()

    @property
    def value(self) -> int | float:
        return int(self.text) if self.is_integer else float(self.text)


@dataclass(frozen=True)
class Name:
    id: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Index:
    """``base@index`` where index is an index variable or an integer literal."""

    base: Name
    index: Name | Number
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / **
    left: Expr
    right: Expr
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Neg:
    operand: Expr
    span: SourceSpan | None = _span()


Expr = Union[Number, Name, Index, BinOp, Neg]


@dataclass(frozen=True)
class Relation:
    lhs: Expr
    op: str
    rhs: Expr
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class IndexRange:
    var: str
    lo: int
    hi: int


@dataclass(frozen=True)
class UnitName:
    text: str
    language: str | None = None


@dataclass(frozen=True)
class SignalDecl:
    name: str
    index_range: IndexRange | None = None
    name_field: UnitName | None = None
    symbol_field: str | None = None
    derivation: Expr | None = None  # None means ``derivation = none``
    span: SourceSpan | None = _span()

    @property
    def is_fundamental(self) -> bool:
        return self.derivation is None


@dataclass(frozen=True)
class ConstantDecl:
    name: str
    value: Expr
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Param:
    name: str
    type_name: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class InvariantDecl:
    name: str
    params: tuple[Param, ...]
    body: tuple[Relation, ...]
    span: SourceSpan | None = _span()


Decl = Union[SignalDecl, ConstantDecl, InvariantDecl]
