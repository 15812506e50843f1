"""Independent oracles and random generators shared by the test modules."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from functools import reduce
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


# -- linear algebra oracles ------------------------------------------------------


def leibniz_det(rows) -> Fraction:
    """Determinant by the permutation expansion."""
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if term == 0:
                break
        total += term
    return total


def minor_scan_rank(entries, ncols: int) -> int:
    """Largest r with a nonzero r x r minor."""
    nrows = len(entries)
    for r in range(min(nrows, ncols), 0, -1):
        for rs in itertools.combinations(range(nrows), r):
            for cs in itertools.combinations(range(ncols), r):
                if leibniz_det([[entries[i][j] for j in cs] for i in rs]) != 0:
                    return r
    return 0


def canonical_vector(v):
    """Divide by the gcd and make the last nonzero entry positive."""
    g = reduce(math.gcd, (abs(x) for x in v))
    v = [x // g for x in v]
    last = next(x for x in reversed(v) if x != 0)
    return tuple(-x for x in v) if last < 0 else tuple(v)


def exhaustive_dimensionless(dims, bases, lo: int = -3, hi: int = 3):
    """Every nonzero integer exponent vector in [lo, hi]^n whose monomial is dimensionless."""
    found = []
    for v in itertools.product(range(lo, hi + 1), repeat=len(dims)):
        if not any(v):
            continue
        if all(sum(x * d.get(b, 0) for x, d in zip(v, dims)) == 0 for b in bases):
            found.append(v)
    return found


def solve_integer_combination(basis, target):
    """Rational coefficients c with sum(c_i * basis_i) == target, or None."""
    n = len(target)
    k = len(basis)
    # augmented system A^T c = target, solved by elimination over Fractions
    rows = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    coeffs = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        coeffs[c] = rows[i][-1]
    return coeffs


# -- evaluation oracle -----------------------------------------------------------


def oracle_eval(node, bindings, constants) -> float:
    """Walk the prefix JSON form of an expression."""
    op = node[0]
    if op == "num":
        return float(node[1])
    if op == "unit":
        return 1.0
    if op == "const":
        return constants[node[1]]
    if op == "param":
        return bindings[node[1] if len(node) == 2 else f"{node[1]}@{node[2]}"]
    if op == "neg":
        return -oracle_eval(node[1], bindings, constants)
    if op == "**":
        x = oracle_eval(node[1], bindings, constants)
        e = Fraction(node[2])
        if e.denominator == 1:
            return math.pow(x, e.numerator)
        root = math.pow(abs(x), e.numerator / e.denominator)
        return -root if x < 0 and e.numerator % 2 else root
    a = oracle_eval(node[1], bindings, constants)
    b = oracle_eval(node[2], bindings, constants)
    return {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else math.nan}[op]


# -- random specifications -------------------------------------------------------

EXPONENTS = ["1", "2", "-1", "-2", "3", "(1/2)", "(-1/2)", "(3/2)", "(2/3)"]
RELOPS = ["~", "<", "<=", ">", ">=", "=="]


def _frac(text: str) -> Fraction:
    return Fraction(text.strip("()"))


def _exp_text(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def random_spec(rng: random.Random) -> str:
    """A random, dimensionally valid Newton specification."""
    out = []
    signals = []  # (name, dims dict over fundamental names, index range or None)
    units = {}  # fundamental name -> symbol
    nf = rng.randint(1, 4)
    for i in range(nf):
        name, sym = f"f{i}", f"u{i}"
        units[name] = sym
        rng_decl = ""
        rng_range = None
        if rng.random() < 0.3:
            hi = rng.randint(0, 3)
            rng_decl, rng_range = f"(k: 0 to {hi})", (0, hi)
        out.append(
            f"{name} : signal{rng_decl} = {{\n"
            f'    name = "unit{i}" English;\n'
            f"    symbol = {sym};\n"
            "    derivation = none;\n}"
        )
        signals.append((name, {name: Fraction(1)}, rng_range))

    for i in range(rng.randint(0, 3)):
        text, dims = "", {}
        for j in range(rng.randint(1, 3)):
            base, bdims, brange = rng.choice(signals)
            e = rng.choice(EXPONENTS)
            ref = base
            if brange is not None and rng.random() < 0.5:
                ref = f"{base}@{rng.randint(*brange)}"
            factor = ref if e == "1" else f"{ref}**{e}"
            op = "*" if j == 0 else rng.choice(["*", "/"])
            text = factor if j == 0 else f"{text} {op} {factor}"
            sign = -1 if op == "/" else 1
            for b, x in bdims.items():
                dims[b] = dims.get(b, 0) + sign * _frac(e) * x
        dims = {b: x for b, x in dims.items() if x != 0}
        name = f"d{i}"
        sym_line = f"    symbol = v{i};\n" if rng.random() < 0.3 else ""
        out.append(f"{name} : signal = {{\n{sym_line}    derivation = {text};\n}}")
        signals.append((name, dims, None))

    constants = []  # (name, dims)
    for i in range(rng.randint(0, 3)):
        value = rng.choice(["2", "9.8", "3.14", "0.5", "1e3", "6.674e-11"])
        dims, factors = {}, []
        for b in rng.sample(sorted(units), rng.randint(0, len(units))):
            e = rng.choice([Fraction(1), Fraction(-1), Fraction(-2), Fraction(1, 2)])
            dims[b] = e
            factors.append(f"{units[b]}**{_exp_text(e)}")
        text = " * ".join([value] + factors)
        out.append(f"c{i} : constant = {text};")
        constants.append((f"c{i}", dims))

    for i in range(rng.randint(0, 3)):
        params = []
        for j in range(rng.randint(1, 4)):
            sname, sdims, srange = rng.choice(signals)
            params.append((f"p{j}", sname, sdims, srange))
        rels = []
        for _ in range(rng.randint(1, 3)):
            dims, factors = {}, []
            pool = [(p[0], p[2], p[3]) for p in params] + [(c[0], c[1], None) for c in constants]
            for _ in range(rng.randint(1, 3)):
                qname, qdims, qrange = rng.choice(pool)
                ref = qname if qrange is None else f"{qname}@{rng.randint(*qrange)}"
                e = rng.choice([Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2)])
                factors.append(ref if e == 1 else f"{ref}**{_exp_text(e)}")
                for b, x in qdims.items():
                    dims[b] = dims.get(b, 0) + e * x
            lhs = " * ".join(factors)
            comp = [f"{units[b]}**{_exp_text(-x)}" for b, x in sorted(dims.items()) if x != 0]
            # lhs * comp is dimensionless, so rhs = number / comp has lhs's dimension
            coeff = rng.choice(["1", "2", "0.25", "3.5"])
            rhs = coeff if not comp else f"{coeff} / ({' * '.join(comp)})"
            if rng.random() < 0.3:
                lhs = f"{lhs} + {lhs}"
            rels.append(f"    {lhs} {rng.choice(RELOPS)} {rhs}")
        ptext = ", ".join(f"{p[0]}: {p[1]}" for p in params)
        out.append(f"inv{i} : invariant({ptext}) = {{\n" + ",\n".join(rels) + "\n}")
    return "\n\n".join(out) + "\n"
