"""Resolved, dimension-checked intermediate representation.

Expression nodes here are the typed counterparts of the AST expressions:
every node records its :class:`DimensionSignature` and identifier leaves
record what they resolved to.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from newton.diagnostics import UnknownInvariant
from newton.dimensions import DimensionSignature


@dataclass(frozen=True)
class TNum:
    value: float
    dim: DimensionSignature


@dataclass(frozen=True)
class TRef:
    """A resolved identifier.

    ``kind`` is ``param`` (invariant parameter), ``const``, ``unit`` (a unit
    symbol, numerically 1) or ``signal`` (only inside derivations). ``index``
    is an integer component or an index-variable name.
    """

    kind: str
    name: str
    dim: DimensionSignature
    index: int | str | None = None

    @property
    def key(self) -> str:
        """Binding key in a sample record (``name`` or ``name@k``)."""
        return self.name if self.index is None else f"{self.name}@{self.index}"


@dataclass(frozen=True)
class TBin:
    op: str  # + - * /
    lhs: TypedExpr
    rhs: TypedExpr
    dim: DimensionSignature


@dataclass(frozen=True)
class TNeg:
    operand: TypedExpr
    dim: DimensionSignature


@dataclass(frozen=True)
class TPow:
    base: TypedExpr
    exponent: Fraction
    dim: DimensionSignature


TypedExpr = Union[TNum, TRef, TBin, TNeg, TPow]

REF_KINDS = ("param", "const", "unit", "signal")


def walk(e: TypedExpr) -> Iterator[TypedExpr]:
    """Pre-order traversal."""
    yield e
    if isinstance(e, TBin):
        yield from walk(e.lhs)
        yield from walk(e.rhs)
    elif isinstance(e, TNeg):
        yield from walk(e.operand)
    elif isinstance(e, TPow):
        yield from walk(e.base)


@dataclass(frozen=True)
class UnitLabel:
    text: str
    language: str | None = None


@dataclass(frozen=True)
class SignalDef:
    id: int
    name: str
    unit_name: UnitLabel | None
    unit_symbol: str | None
    is_fundamental: bool
    dimension: DimensionSignature
    index_range: tuple[int, int] | None = None
    derivation: TypedExpr | None = None
    index_var: str | None = None

    @property
    def components(self) -> int:
        if self.index_range is None:
            return 1
        lo, hi = self.index_range
        return hi - lo + 1


@dataclass(frozen=True)
class ConstantDef:
    name: str
    value: float
    dimension: DimensionSignature


@dataclass(frozen=True)
class ParamDef:
    name: str
    signal: str
    dimension: DimensionSignature
    index_range: tuple[int, int] | None = None


@dataclass(frozen=True)
class RelationDef:
    lhs: TypedExpr
    op: str
    rhs: TypedExpr


@dataclass(frozen=True)
class InvariantDef:
    name: str
    params: tuple[ParamDef, ...]
    relations: tuple[RelationDef, ...]

    def param(self, name: str) -> ParamDef:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    def referenced_constants(self) -> list[TRef]:
        """Constant references in the body, first occurrence order, deduplicated."""
        seen: dict[str, TRef] = {}
        for rel in self.relations:
            for side in (rel.lhs, rel.rhs):
                for node in walk(side):
                    if isinstance(node, TRef) and node.kind == "const" and node.name not in seen:
                        seen[node.name] = node
        return list(seen.values())


@dataclass(frozen=True)
class NewtonIR:
    fundamentals: tuple[str, ...]
    signals: tuple[SignalDef, ...]
    constants: tuple[ConstantDef, ...]
    invariants: tuple[InvariantDef, ...]

    def signal(self, name: str) -> SignalDef:
        for s in self.signals:
            if s.name == name:
                return s
        raise KeyError(name)

    def constant(self, name: str) -> ConstantDef:
        for c in self.constants:
            if c.name == name:
                return c
        raise KeyError(name)

    def invariant(self, name: str) -> InvariantDef:
        for inv in self.invariants:
            if inv.name == name:
                return inv
        raise UnknownInvariant(name)

    def unit_symbols(self) -> dict[str, SignalDef]:
        return {s.unit_symbol: s for s in self.signals if s.unit_symbol is not None}

    def constant_values(self) -> dict[str, float]:
        return {c.name: c.value for c in self.constants}

    def format_dim(self, dim: DimensionSignature) -> str:
        return dim.format(self.fundamentals)
