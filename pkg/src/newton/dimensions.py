"""Exact dimensional algebra.

A :class:`DimensionSignature` is a sparse vector of rational exponents over the
fundamental signals of one specification, identified by their declaration
ordinal. Signatures form an abelian group under multiplication; raising to a
rational power scales every exponent. No floating point is involved.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction
BaseSignalId = int


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"exponents must be exact rationals, got {type(value).__name__}")


class DimensionSignature:
    """Immutable mapping ``BaseSignalId -> Fraction`` with no zero entries."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents: Mapping[BaseSignalId, object] | Iterable = ()):
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[int, Fraction] = {}
        for base, exp in pairs:
            if isinstance(base, bool) or not isinstance(base, int) or base < 0:
                raise ValueError(f"base signal ids are non-negative ints, got {base!r}")
            acc[base] = acc.get(base, Fraction(0)) + as_rational(exp)
        self._items = tuple(sorted((b, e) for b, e in acc.items() if e != 0))
        self._hash = hash(self._items)

    @classmethod
    def unit(cls, base: BaseSignalId) -> DimensionSignature:
        return cls({base: 1})

    # -- mapping-ish access ----------------------------------------------

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._items

    def bases(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self._items)

    def exponent(self, base: BaseSignalId) -> Fraction:
        for b, e in self._items:
            if b == base:
                return e
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DimensionSignature):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._items)

    # -- group operations ------------------------------------------------

    def __mul__(self, other: DimensionSignature) -> DimensionSignature:
        return dim_mul(self, other)

    def __truediv__(self, other: DimensionSignature) -> DimensionSignature:
        return dim_mul(self, dim_pow(other, -1))

    def __pow__(self, exponent) -> DimensionSignature:
        return dim_pow(self, exponent)

    @property
    def is_dimensionless(self) -> bool:
        return not self._items

    def format(self, basis: Sequence[str] | None = None) -> str:
        """``{length:1, time:-2}``; ids are shown as ``#n`` without a basis."""

        def label(b: int) -> str:
            if basis is not None and b < len(basis):
                return basis[b]
            return f"#{b}"

        return "{" + ", ".join(f"{label(b)}:{e}" for b, e in self._items) + "}"

    def __repr__(self) -> str:
        return f"DimensionSignature({self.format()})"


DIMENSIONLESS = DimensionSignature()


def dim_mul(a: DimensionSignature, b: DimensionSignature) -> DimensionSignature:
    return DimensionSignature(a.items() + b.items())


def dim_pow(a: DimensionSignature, e) -> DimensionSignature:
    e = as_rational(e)
    return DimensionSignature((base, exp * e) for base, exp in a.items())


def dim_inv(a: DimensionSignature) -> DimensionSignature:
    return dim_pow(a, -1)


def dim_is_dimensionless(a: DimensionSignature) -> bool:
    return a.is_dimensionless


def dim_product(factors: Iterable[tuple[DimensionSignature, object]]) -> DimensionSignature:
    """Multiply out ``prod(sig ** exp)`` over ``(sig, exp)`` pairs."""
    result = DIMENSIONLESS
    for sig, exp in factors:
        result = dim_mul(result, dim_pow(sig, exp))
    return result
