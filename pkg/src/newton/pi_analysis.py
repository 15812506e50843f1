"""Buckingham Pi analysis over exact rational dimension matrices.

For ``n`` quantities whose dimension matrix has rank ``k``, the dimensionless
monomials ``prod(q_j ** x_j)`` are exactly the integer vectors ``x`` in the
null space of the matrix. :func:`pi_groups` returns ``n - k`` of them forming a
basis of that integer lattice, in a canonical form:

* one group per free column of the reduced row echelon form, in ascending
  column order; the group's exponent on its own free column is positive and
  its exponents on later free columns are zero;
* exponents on earlier free columns are reduced modulo the pivots they meet,
  as in a Hermite normal form.

When the free-column construction already yields an integer lattice basis
(always the case for integer-exponent dimensions with unit pivots) the result
is exactly that construction scaled to integers. The last nonzero exponent of
every group is its free column, so it is always positive.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from newton.dimensions import DimensionSignature
from newton.ir import InvariantDef


@dataclass(frozen=True)
class DimensionMatrix:
    """Rows are fundamental signals (ascending id), columns are quantities."""

    bases: tuple[int, ...]
    columns: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.columns)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class PiGroup:
    """A dimensionless monomial; ``exponents`` lists nonzero integer powers in column order."""

    exponents: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def monomial(self) -> str:
        """``period^2 * g * L^-1`` (positive powers first)."""
        pos = [(q, e) for q, e in self.exponents if e > 0]
        neg = [(q, e) for q, e in self.exponents if e < 0]
        return " * ".join(q if e == 1 else f"{q}^{e}" for q, e in pos + neg)

    def fraction(self) -> str:
        """``period^2 * g / L``."""

        def factors(items):
            return " * ".join(q if abs(e) == 1 else f"{q}^{abs(e)}" for q, e in items)

        num = factors([(q, e) for q, e in self.exponents if e > 0]) or "1"
        den_items = [(q, e) for q, e in self.exponents if e < 0]
        if not den_items:
            return num
        den = factors(den_items)
        return f"{num} / ({den})" if len(den_items) > 1 else f"{num} / {den}"

    def __str__(self) -> str:
        return self.monomial()


# -- building matrices -------------------------------------------------------


def quantities(inv: InvariantDef, include_constants: bool = True) -> list[tuple[str, DimensionSignature]]:
    """Parameters in declaration order, then dimensioned constants the body uses."""
    cols = [(p.name, p.dimension) for p in inv.params]
    if include_constants:
        cols += [(c.name, c.dim) for c in inv.referenced_constants() if not c.dim.is_dimensionless]
    return cols


def matrix_from_columns(cols: Sequence[tuple[str, DimensionSignature]]) -> DimensionMatrix:
    bases = sorted({b for _, dim in cols for b in dim.bases()})
    entries = tuple(tuple(dim.exponent(b) for _, dim in cols) for b in bases)
    return DimensionMatrix(tuple(bases), tuple(name for name, _ in cols), entries)


def dimension_matrix(inv: InvariantDef, include_constants: bool = True) -> DimensionMatrix:
    return matrix_from_columns(quantities(inv, include_constants))


# -- exact linear algebra ----------------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(m: DimensionMatrix) -> int:
    return len(rref(m.entries, m.n)[1])


def _integer_rows(entries: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in entries:
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def _integer_kernel(a: list[list[int]], ncols: int) -> list[list[int]]:
    """Z-basis of ``{x in Z^n : a x = 0}`` via unimodular column operations."""
    a = [row[:] for row in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns of u track ops

    def col_axpy(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    def col_swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    k = 0
    for row in a:
        if k == ncols:
            break
        while True:
            nz = [c for c in range(k, ncols) if row[c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda c: abs(row[c]))
            if len(nz) == 1:
                col_swap(k, p)
                k += 1
                break
            for c in nz:
                if c != p:
                    col_axpy(c, p, row[c] // row[p])
    return [[u[i][j] for i in range(ncols)] for j in range(k, ncols)]


def _hermite_on(vectors: list[list[int]], coords: Sequence[int]) -> list[list[int]]:
    """Row-style Hermite normal form of ``vectors`` restricted to ``coords``.

    Operations are applied to whole vectors. ``vectors`` projected onto
    ``coords`` must be square and nonsingular.
    """
    rows = [v[:] for v in vectors]
    for c, coord in enumerate(coords):
        while True:
            nz = [i for i in range(c, len(rows)) if rows[i][coord] != 0]
            p = min(nz, key=lambda i: abs(rows[i][coord]))
            if len(nz) == 1:
                break
            for i in nz:
                if i != p:
                    q = rows[i][coord] // rows[p][coord]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[p])]
        rows[c], rows[p] = rows[p], rows[c]
        if rows[c][coord] < 0:
            rows[c] = [-x for x in rows[c]]
        d = rows[c][coord]
        for i in range(c):
            q = rows[i][coord] // d
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[c])]
    return rows


def nullspace_basis(m: DimensionMatrix) -> list[list[int]]:
    """Canonical integer basis of the null space (see module docstring)."""
    n = m.n
    _, pivots = rref(m.entries, n)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return []
    kernel = _integer_kernel(_integer_rows(m.entries), n)
    assert len(kernel) == len(free), "kernel dimension disagrees with rank"
    reduced = _hermite_on(kernel, list(reversed(free)))
    basis = list(reversed(reduced))
    for v in basis:
        g = gcd(*v)
        assert g == 1, f"non-primitive lattice vector {v}"
    return basis


def groups_from_matrix(m: DimensionMatrix) -> list[PiGroup]:
    return [
        PiGroup(tuple((name, x) for name, x in zip(m.columns, v) if x != 0))
        for v in nullspace_basis(m)
    ]


def pi_groups(inv: InvariantDef, include_constants: bool = True) -> list[PiGroup]:
    """The ``n - k`` canonical dimensionless groups of ``inv``."""
    return groups_from_matrix(dimension_matrix(inv, include_constants))
