"""Name resolution and dimension checking: AST -> :class:`NewtonIR`.

Declarations may only refer to entities declared before them. Signal names,
constant names, invariant names and unit symbols share a single namespace.
Inside an invariant, parameters shadow global names.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from newton.diagnostics import (
    Diagnostic,
    EvalError,
    SemanticError,
    SourceSpan,
)
from newton.dimensions import DIMENSIONLESS, DimensionSignature, dim_mul, dim_pow
from newton.frontend.nodes import (
    BinOp,
    ConstantDecl,
    Decl,
    Expr,
    Index,
    InvariantDecl,
    Name,
    Neg,
    Number,
    SignalDecl,
)
from newton.ir import (
    ConstantDef,
    InvariantDef,
    NewtonIR,
    ParamDef,
    RelationDef,
    SignalDef,
    TBin,
    TNeg,
    TNum,
    TPow,
    TRef,
    TypedExpr,
    UnitLabel,
)
from newton.runtime import eval_expr


class _SemFailure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(diagnostic.format())


def _error(code: str, message: str, span: SourceSpan | None) -> _SemFailure:
    return _SemFailure(Diagnostic(code, message, span))


@dataclass(frozen=True)
class Binding:
    """What a name means in an expression scope."""

    kind: str  # signal | param | const | unit | index
    dim: DimensionSignature = DIMENSIONLESS
    index_range: tuple[int, int] | None = None


@dataclass
class Scope:
    bindings: dict[str, Binding] = field(default_factory=dict)
    later: dict[str, str] = field(default_factory=dict)  # names declared further down
    basis: Sequence[str] = ()
    forbidden: dict[str, str] = field(default_factory=dict)  # known names unusable here

    def lookup(self, node: Name) -> Binding:
        b = self.bindings.get(node.id)
        if b is not None:
            return b
        if node.id in self.forbidden:
            raise _error("UnknownIdentifier", self.forbidden[node.id], node.span)
        if node.id in self.later:
            raise _error(
                "ForwardReference",
                f"{node.id!r} is used before its {self.later[node.id]} declaration",
                node.span,
            )
        raise _error("UnknownIdentifier", f"unknown identifier {node.id!r}", node.span)

    def fmt(self, dim: DimensionSignature) -> str:
        return dim.format(self.basis)


# -- expression typing ----------------------------------------------------------


_BINDING_NOUN = {"const": "a constant", "unit": "a unit symbol", "invariant": "an invariant"}


def fold_exponent(e: Expr) -> Fraction:
    """Reduce an exponent expression to an exact rational.

    Accepts integer literals combined with unary minus and ``/`` (so ``-2``,
    ``(1/2)``, ``(-3/2)``). Anything else raises NonRationalExponent.
    """
    if isinstance(e, Number) and e.is_integer:
        return Fraction(int(e.text))
    if isinstance(e, Neg):
        return -fold_exponent(e.operand)
    if isinstance(e, BinOp) and e.op == "/":
        num, den = fold_exponent(e.left), fold_exponent(e.right)
        if den == 0:
            raise _error("NonRationalExponent", "exponent divides by zero", e.span)
        return num / den
    raise _error(
        "NonRationalExponent",
        "exponent must be an integer or a ratio of integers such as (1/2)",
        getattr(e, "span", None),
    )


def _check_index(node: Index, binding: Binding, scope: Scope) -> int | str:
    base = node.base.id
    if binding.index_range is None:
        raise _error("BadIndex", f"{base!r} is not a multi-component signal", node.span)
    lo, hi = binding.index_range
    if isinstance(node.index, Number):
        if not node.index.is_integer:
            raise _error("BadIndex", "index must be an integer", node.index.span)
        k = int(node.index.text)
        if not lo <= k <= hi:
            raise _error("BadIndex", f"index {k} outside {base}'s range {lo} to {hi}", node.index.span)
        return k
    var = scope.lookup(node.index)
    if var.kind != "index":
        raise _error("BadIndex", f"{node.index.id!r} is not an index variable", node.index.span)
    vlo, vhi = var.index_range
    if vlo < lo or vhi > hi:
        raise _error(
            "BadIndex",
            f"index {node.index.id} ranges {vlo} to {vhi}, outside {base}'s range {lo} to {hi}",
            node.index.span,
        )
    return node.index.id


def check_expr(e: Expr, env: Scope | Mapping[str, Binding]) -> TypedExpr:
    """Assign a dimension to every node of ``e``.

    Raises SemanticError (DimensionMismatch, NonRationalExponent, BadIndex,
    UnknownIdentifier, ForwardReference).
    """
    scope = env if isinstance(env, Scope) else Scope(dict(env))
    try:
        return _check(e, scope)
    except _SemFailure as f:
        raise SemanticError([f.diagnostic]) from None


def _check(e: Expr, scope: Scope) -> TypedExpr:
    if isinstance(e, Number):
        value = float(e.text)
        if not math.isfinite(value):
            raise _error("DomainError", f"numeric literal {e.text} is out of range", e.span)
        return TNum(value, DIMENSIONLESS)
    if isinstance(e, Name):
        b = scope.lookup(e)
        if b.kind == "index":
            raise _error("BadIndex", f"index variable {e.id!r} used as a value", e.span)
        if b.kind == "param" and b.index_range is not None:
            raise _error("BadIndex", f"parameter {e.id!r} has components; write {e.id}@k", e.span)
        return TRef(b.kind, e.id, b.dim)
    if isinstance(e, Index):
        b = scope.lookup(e.base)
        if b.kind not in ("signal", "param"):
            raise _error("BadIndex", f"{e.base.id!r} cannot be indexed", e.span)
        return TRef(b.kind, e.base.id, b.dim, _check_index(e, b, scope))
    if isinstance(e, Neg):
        operand = _check(e.operand, scope)
        return TNeg(operand, operand.dim)
    if isinstance(e, BinOp):
        if e.op == "**":
            base = _check(e.left, scope)
            exponent = fold_exponent(e.right)
            return TPow(base, exponent, dim_pow(base.dim, exponent))
        lhs = _check(e.left, scope)
        rhs = _check(e.right, scope)
        if e.op in ("+", "-"):
            if lhs.dim != rhs.dim:
                raise _error(
                    "DimensionMismatch",
                    f"operands of '{e.op}' differ: {scope.fmt(lhs.dim)} vs {scope.fmt(rhs.dim)}",
                    e.span,
                )
            return TBin(e.op, lhs, rhs, lhs.dim)
        if e.op == "*":
            return TBin("*", lhs, rhs, dim_mul(lhs.dim, rhs.dim))
        if e.op == "/":
            return TBin("/", lhs, rhs, dim_mul(lhs.dim, dim_pow(rhs.dim, -1)))
    raise TypeError(f"not an expression node: {e!r}")


def check_derivation_monomial(e: Expr) -> None:
    """Accept only products, quotients and rational powers of signal references.

    Raises SemanticError(NonMonomialDerivation) pointing at the offending node.
    """
    try:
        _monomial(e)
    except _SemFailure as f:
        raise SemanticError([f.diagnostic]) from None


def _monomial(e: Expr) -> None:
    if isinstance(e, (Name, Index)):
        return
    if isinstance(e, BinOp) and e.op in ("*", "/"):
        _monomial(e.left)
        _monomial(e.right)
        return
    if isinstance(e, BinOp) and e.op == "**":
        _monomial(e.left)
        fold_exponent(e.right)
        return
    what = {
        Number: "a numeric literal",
        Neg: "a negation",
        BinOp: f"'{getattr(e, 'op', '')}'",
    }.get(type(e), "this expression")
    raise _error("NonMonomialDerivation", f"a derivation must be a monomial; found {what}", e.span)


# -- whole-specification analysis ------------------------------------------------


_KIND_WORD = {SignalDecl: "signal", ConstantDecl: "constant", InvariantDecl: "invariant"}


class _Analyzer:
    def __init__(self):
        self.diagnostics: list[Diagnostic] = []
        self.globals: dict[str, Binding] = {}
        self.defined_at: dict[str, SourceSpan | None] = {}
        self.fundamentals: list[str] = []
        self.signals: list[SignalDef] = []
        self.constants: list[ConstantDef] = []
        self.invariants: list[InvariantDef] = []
        self.invariant_names: set[str] = set()

    def report(self, code: str, message: str, span: SourceSpan | None) -> None:
        self.diagnostics.append(Diagnostic(code, message, span))

    def declare(self, name: str, binding: Binding | None, span: SourceSpan | None) -> bool:
        if name in self.defined_at:
            first = self.defined_at[name]
            where = f" (first defined at {first})" if first is not None else ""
            self.report("DuplicateDefinition", f"{name!r} is already defined{where}", span)
            return False
        self.defined_at[name] = span
        if binding is not None:
            self.globals[name] = binding
        return True

    def scope(self, later: dict[str, str], extra: Mapping[str, Binding] = (), kinds=None) -> Scope:
        bindings = {k: b for k, b in self.globals.items() if kinds is None or b.kind in kinds}
        forbidden = {}
        for k, b in self.globals.items():
            if k not in bindings:
                forbidden[k] = f"{b.kind} {k!r} cannot be used here"
        for k in self.invariant_names:
            forbidden[k] = f"{k!r} is an invariant and cannot be referenced"
        bindings.update(extra)
        return Scope(bindings, later, tuple(self.fundamentals), forbidden)

    def run(self, decls: Sequence[Decl]) -> NewtonIR:
        pending: list[dict[str, str]] = []
        later: dict[str, str] = {}
        for d in reversed(decls):
            pending.append(dict(later))
            later[d.name] = _KIND_WORD[type(d)]
            if isinstance(d, SignalDecl) and d.symbol_field is not None:
                later[d.symbol_field] = "unit symbol"
        pending.reverse()

        for d, later_names in zip(decls, pending):
            try:
                if isinstance(d, SignalDecl):
                    self.signal(d, later_names)
                elif isinstance(d, ConstantDecl):
                    self.constant(d, later_names)
                else:
                    self.invariant(d, later_names)
            except _SemFailure as f:
                self.diagnostics.append(f.diagnostic)
        if self.diagnostics:
            raise SemanticError(self.diagnostics)
        return NewtonIR(
            tuple(self.fundamentals),
            tuple(self.signals),
            tuple(self.constants),
            tuple(self.invariants),
        )

    def signal(self, d: SignalDecl, later: dict[str, str]) -> None:
        index_range = None
        if d.index_range is not None:
            r = d.index_range
            if r.lo > r.hi:
                raise _error("BadIndex", f"empty index range {r.lo} to {r.hi}", d.span)
            index_range = (r.lo, r.hi)

        if d.derivation is None:
            base = len(self.fundamentals)
            dim = DimensionSignature.unit(base)
            derivation = None
        else:
            _monomial(d.derivation)
            extra = {}
            if d.index_range is not None:
                extra[d.index_range.var] = Binding("index", DIMENSIONLESS, index_range)
            scope = self.scope(later, extra, kinds=("signal",))
            for k, b in self.globals.items():
                if b.kind in ("unit", "const"):
                    scope.forbidden[k] = f"{b.kind} {k!r} is not a signal; derivations are monomials over signals"
            derivation = _check(d.derivation, scope)
            dim = derivation.dim

        if not self.declare(d.name, Binding("signal", dim, index_range), d.span):
            return
        if d.symbol_field is not None:
            self.declare(d.symbol_field, Binding("unit", dim), d.span)
        if d.derivation is None:
            self.fundamentals.append(d.name)
        unit_name = None
        if d.name_field is not None:
            unit_name = UnitLabel(d.name_field.text, d.name_field.language)
        self.signals.append(
            SignalDef(
                len(self.signals),
                d.name,
                unit_name,
                d.symbol_field,
                d.derivation is None,
                dim,
                index_range,
                derivation,
                d.index_range.var if d.index_range is not None else None,
            )
        )

    def constant(self, d: ConstantDecl, later: dict[str, str]) -> None:
        scope = self.scope(later, kinds=("const", "unit"))
        for k, b in self.globals.items():
            if b.kind == "signal":
                scope.forbidden[k] = f"signal {k!r} has no value; use its unit symbol"
        texpr = _check(d.value, scope)
        try:
            value = eval_expr(texpr, {}, {c.name: c.value for c in self.constants})
        except EvalError as err:
            raise _error("DomainError", f"cannot evaluate constant {d.name!r}: {err}", d.span) from None
        if not math.isfinite(value):
            raise _error("DomainError", f"constant {d.name!r} is not finite", d.span)
        if self.declare(d.name, Binding("const", texpr.dim), d.span):
            self.constants.append(ConstantDef(d.name, value, texpr.dim))

    def invariant(self, d: InvariantDecl, later: dict[str, str]) -> None:
        params: list[ParamDef] = []
        extra: dict[str, Binding] = {}
        failed = False
        for p in d.params:
            if p.name in extra:
                self.report("DuplicateDefinition", f"parameter {p.name!r} is repeated", p.span)
                failed = True
                continue
            sig = self.globals.get(p.type_name)
            if sig is None or sig.kind != "signal":
                if sig is not None:
                    kind = _BINDING_NOUN.get(sig.kind, sig.kind)
                    msg = f"parameter type {p.type_name!r} is {kind}, not a signal"
                    code = "UnknownIdentifier"
                elif p.type_name in later:
                    msg = f"signal {p.type_name!r} is declared after this invariant"
                    code = "ForwardReference"
                else:
                    msg = f"unknown signal type {p.type_name!r}"
                    code = "UnknownIdentifier"
                self.report(code, msg, p.span)
                failed = True
                continue
            params.append(ParamDef(p.name, p.type_name, sig.dim, sig.index_range))
            extra[p.name] = Binding("param", sig.dim, sig.index_range)

        scope = self.scope(later, extra, kinds=("const", "unit"))
        for k, b in self.globals.items():
            if b.kind == "signal" and k not in extra:
                scope.forbidden[k] = f"signal {k!r} must be declared as a parameter to be used"

        relations: list[RelationDef] = []
        for rel in [] if failed else d.body:
            try:
                lhs = _check(rel.lhs, scope)
                rhs = _check(rel.rhs, scope)
                if lhs.dim != rhs.dim:
                    raise _error(
                        "DimensionMismatch",
                        f"sides of '{rel.op}' differ: {scope.fmt(lhs.dim)} vs {scope.fmt(rhs.dim)}",
                        rel.span,
                    )
                relations.append(RelationDef(lhs, rel.op, rhs))
            except _SemFailure as f:
                self.diagnostics.append(f.diagnostic)
                failed = True

        if self.declare(d.name, None, d.span):
            self.invariant_names.add(d.name)
            if not failed:
                self.invariants.append(InvariantDef(d.name, tuple(params), tuple(relations)))


def analyze(decls: Sequence[Decl]) -> NewtonIR:
    """Resolve declarations into a dimension-checked :class:`NewtonIR`.

    Raises SemanticError listing every problem found; analysis continues past
    a failing declaration.
    """
    return _Analyzer().run(decls)
