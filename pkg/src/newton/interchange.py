"""Canonical JSON interchange for :class:`NewtonIR`.

Documents are emitted with sorted keys, two-space indentation and a trailing
newline. Exponents are strings (``"-2"``, ``"1/2"``) so they stay exact; real
numbers use the shortest decimal that round-trips. Expressions are prefix
arrays, for example ``["*", ["num", 2.0], ["const", "Pi"]]``. The schema is
described in ``docs/ir-format.md``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from newton.diagnostics import LoadError
from newton.dimensions import DIMENSIONLESS, DimensionSignature, dim_mul, dim_pow
from newton.frontend.lexer import RELATIONAL_OPS
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
from newton.pi_analysis import dimension_matrix, pi_groups

FORMAT_VERSION = "1.0"


# -- emitting --------------------------------------------------------------------


def _dim_json(dim: DimensionSignature, basis) -> dict[str, str]:
    return {basis[b]: str(e) for b, e in dim.items()}


def expr_to_json(e: TypedExpr) -> list:
    if isinstance(e, TNum):
        return ["num", e.value]
    if isinstance(e, TRef):
        node = [e.kind, e.name]
        if e.index is not None:
            node.append(e.index)
        return node
    if isinstance(e, TNeg):
        return ["neg", expr_to_json(e.operand)]
    if isinstance(e, TPow):
        return ["**", expr_to_json(e.base), str(e.exponent)]
    if isinstance(e, TBin):
        return [e.op, expr_to_json(e.lhs), expr_to_json(e.rhs)]
    raise TypeError(f"not a typed expression: {e!r}")


def _signal_json(s: SignalDef, basis) -> dict:
    return {
        "id": s.id,
        "name": s.name,
        "unit_name": None
        if s.unit_name is None
        else {"text": s.unit_name.text, "language": s.unit_name.language},
        "unit_symbol": s.unit_symbol,
        "is_fundamental": s.is_fundamental,
        "dimension": _dim_json(s.dimension, basis),
        "index_range": None if s.index_range is None else list(s.index_range),
        "index_var": s.index_var,
        "components": s.components,
        "derivation": None if s.derivation is None else expr_to_json(s.derivation),
    }


def _invariant_json(inv: InvariantDef, basis) -> dict:
    m = dimension_matrix(inv)
    return {
        "name": inv.name,
        "params": [
            {"name": p.name, "signal": p.signal, "dimension": _dim_json(p.dimension, basis)}
            for p in inv.params
        ],
        "relations": [
            {"op": r.op, "lhs": expr_to_json(r.lhs), "rhs": expr_to_json(r.rhs)}
            for r in inv.relations
        ],
        "dimension_matrix": {
            "rows": [basis[b] for b in m.bases],
            "columns": list(m.columns),
            "entries": [[str(x) for x in row] for row in m.entries],
        },
        "pi_groups": [{"exponents": g.as_dict(), "text": g.fraction()} for g in pi_groups(inv)],
    }


def ir_to_document(ir: NewtonIR) -> dict:
    basis = ir.fundamentals
    return {
        "format_version": FORMAT_VERSION,
        "fundamentals": list(basis),
        "signals": [_signal_json(s, basis) for s in ir.signals],
        "constants": [
            {"name": c.name, "value": c.value, "dimension": _dim_json(c.dimension, basis)}
            for c in ir.constants
        ],
        "invariants": [_invariant_json(inv, basis) for inv in ir.invariants],
    }


def emit_ir(ir: NewtonIR) -> str:
    """Serialize ``ir`` to its canonical JSON text."""
    return json.dumps(ir_to_document(ir), sort_keys=True, indent=2, allow_nan=False) + "\n"


# -- loading ---------------------------------------------------------------------


def _fail(path: str, message: str):
    raise LoadError(path, message)


def _obj(value, path: str, keys: set[str]) -> dict:
    if not isinstance(value, dict):
        _fail(path, "expected an object")
    missing = keys - value.keys()
    if missing:
        _fail(path, f"missing key(s) {sorted(missing)}")
    extra = value.keys() - keys
    if extra:
        _fail(path, f"unexpected key(s) {sorted(extra)}")
    return value


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        _fail(path, "expected an array")
    return value


def _str(value, path: str, optional: bool = False):
    if value is None and optional:
        return None
    if not isinstance(value, str) or not value:
        _fail(path, "expected a non-empty string")
    return value


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, "expected an integer")
    return value


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        _fail(path, "expected a finite number")
    return float(value)


def _rational(value, path: str) -> Fraction:
    if not isinstance(value, str):
        _fail(path, 'expected a rational string such as "-2" or "1/2"')
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        _fail(path, f"malformed rational {value!r}")


class _Loader:
    def __init__(self, doc):
        self.doc = doc
        self.basis: list[str] = []
        self.names: set[str] = set()
        self.signals: dict[str, SignalDef] = {}
        self.units: dict[str, SignalDef] = {}
        self.constants: dict[str, ConstantDef] = {}

    def claim(self, name: str, path: str) -> None:
        if name in self.names:
            _fail(path, f"duplicate name {name!r}")
        self.names.add(name)

    def dimension(self, value, path: str) -> DimensionSignature:
        if not isinstance(value, dict):
            _fail(path, "expected a dimension object")
        exps = {}
        for base, exp in value.items():
            if base not in self.basis:
                _fail(f"{path}.{base}", f"unknown fundamental signal {base!r}")
            e = _rational(exp, f"{path}.{base}")
            if e == 0:
                _fail(f"{path}.{base}", "zero exponents are not stored")
            exps[self.basis.index(base)] = e
        return DimensionSignature(exps)

    def expr(self, node, path: str, resolve) -> TypedExpr:
        """``resolve(kind, name, index, path) -> (dim, index)`` validates references."""
        if not isinstance(node, list) or not node or not isinstance(node[0], str):
            _fail(path, "expected a prefix expression array")
        op, args = node[0], node[1:]

        def arity(n):
            if len(args) != n:
                _fail(path, f"'{op}' takes {n} operand(s), got {len(args)}")

        if op == "num":
            arity(1)
            return TNum(_real(args[0], f"{path}[1]"), DIMENSIONLESS)
        if op in ("param", "const", "unit", "signal"):
            if len(args) not in (1, 2):
                _fail(path, f"'{op}' takes a name and an optional index")
            name = _str(args[0], f"{path}[1]")
            index = args[1] if len(args) == 2 else None
            if index is not None and (isinstance(index, bool) or not isinstance(index, (int, str))):
                _fail(f"{path}[2]", "index must be an integer or index variable")
            dim = resolve(op, name, index, path)
            return TRef(op, name, dim, index)
        if op == "neg":
            arity(1)
            operand = self.expr(args[0], f"{path}[1]", resolve)
            return TNeg(operand, operand.dim)
        if op == "**":
            arity(2)
            base = self.expr(args[0], f"{path}[1]", resolve)
            e = _rational(args[1], f"{path}[2]")
            return TPow(base, e, dim_pow(base.dim, e))
        if op in ("+", "-", "*", "/"):
            arity(2)
            lhs = self.expr(args[0], f"{path}[1]", resolve)
            rhs = self.expr(args[1], f"{path}[2]", resolve)
            if op in ("+", "-"):
                if lhs.dim != rhs.dim:
                    _fail(path, f"operands of '{op}' have different dimensions")
                dim = lhs.dim
            elif op == "*":
                dim = dim_mul(lhs.dim, rhs.dim)
            else:
                dim = dim_mul(lhs.dim, dim_pow(rhs.dim, -1))
            return TBin(op, lhs, rhs, dim)
        _fail(f"{path}[0]", f"unknown operator {op!r}")

    @staticmethod
    def _check_index(index, index_range, allowed_var, path: str) -> None:
        if index is None:
            return
        if index_range is None:
            _fail(path, "reference is indexed but the signal has a single component")
        if isinstance(index, int):
            if not index_range[0] <= index <= index_range[1]:
                _fail(path, f"index {index} outside {index_range[0]} to {index_range[1]}")
        elif index != allowed_var:
            _fail(path, f"unknown index variable {index!r}")

    def signal(self, raw, path: str) -> SignalDef:
        keys = {
            "id", "name", "unit_name", "unit_symbol", "is_fundamental", "dimension",
            "index_range", "index_var", "components", "derivation",
        }
        raw = _obj(raw, path, keys)
        sid = _int(raw["id"], f"{path}.id")
        if sid != len(self.signals):
            _fail(f"{path}.id", f"expected id {len(self.signals)}")
        name = _str(raw["name"], f"{path}.name")
        self.claim(name, f"{path}.name")
        unit_name = None
        if raw["unit_name"] is not None:
            un = _obj(raw["unit_name"], f"{path}.unit_name", {"text", "language"})
            if not isinstance(un["text"], str):
                _fail(f"{path}.unit_name.text", "expected a string")
            unit_name = UnitLabel(un["text"], _str(un["language"], f"{path}.unit_name.language", True))
        symbol = _str(raw["unit_symbol"], f"{path}.unit_symbol", True)
        if symbol is not None:
            self.claim(symbol, f"{path}.unit_symbol")
        fundamental = raw["is_fundamental"]
        if not isinstance(fundamental, bool):
            _fail(f"{path}.is_fundamental", "expected a boolean")
        index_range = None
        if raw["index_range"] is not None:
            r = _list(raw["index_range"], f"{path}.index_range")
            if len(r) != 2:
                _fail(f"{path}.index_range", "expected [lo, hi]")
            lo, hi = _int(r[0], f"{path}.index_range[0]"), _int(r[1], f"{path}.index_range[1]")
            if lo > hi:
                _fail(f"{path}.index_range", "empty range")
            index_range = (lo, hi)
        index_var = _str(raw["index_var"], f"{path}.index_var", True)
        if (index_var is None) != (index_range is None):
            _fail(f"{path}.index_var", "index_var and index_range must both be present or absent")
        components = _int(raw["components"], f"{path}.components")
        dim = self.dimension(raw["dimension"], f"{path}.dimension")

        derivation = None
        if fundamental:
            if raw["derivation"] is not None:
                _fail(f"{path}.derivation", "fundamental signals have no derivation")
            base = sum(1 for s in self.signals.values() if s.is_fundamental)
            if base >= len(self.basis) or self.basis[base] != name:
                _fail(f"{path}.name", "fundamental signals must follow the fundamentals list")
            if dim != DimensionSignature.unit(base):
                _fail(f"{path}.dimension", "a fundamental signal's dimension is its own base")
        else:
            if raw["derivation"] is None:
                _fail(f"{path}.derivation", "derived signals need a derivation")

            def resolve(kind, ref, index, rpath):
                if kind != "signal":
                    _fail(rpath, f"derivations may only reference signals, not {kind}")
                if ref not in self.signals:
                    _fail(rpath, f"unknown signal {ref!r}")
                target = self.signals[ref]
                self._check_index(index, target.index_range, index_var, rpath)
                if isinstance(index, str) and not (
                    target.index_range[0] <= index_range[0] and index_range[1] <= target.index_range[1]
                ):
                    _fail(rpath, "index variable range exceeds the indexed signal's range")
                return target.dimension

            derivation = self.expr(raw["derivation"], f"{path}.derivation", resolve)
            if derivation.dim != dim:
                _fail(f"{path}.dimension", "does not match the derivation")
        sig = SignalDef(sid, name, unit_name, symbol, fundamental, dim, index_range, derivation, index_var)
        if components != sig.components:
            _fail(f"{path}.components", f"expected {sig.components}")
        return sig

    def invariant(self, raw, path: str) -> InvariantDef:
        raw = _obj(raw, path, {"name", "params", "relations", "dimension_matrix", "pi_groups"})
        name = _str(raw["name"], f"{path}.name")
        self.claim(name, f"{path}.name")
        params: dict[str, ParamDef] = {}
        for i, p in enumerate(_list(raw["params"], f"{path}.params")):
            ppath = f"{path}.params[{i}]"
            p = _obj(p, ppath, {"name", "signal", "dimension"})
            pname = _str(p["name"], f"{ppath}.name")
            if pname in params:
                _fail(f"{ppath}.name", f"duplicate parameter {pname!r}")
            signal = _str(p["signal"], f"{ppath}.signal")
            if signal not in self.signals:
                _fail(f"{ppath}.signal", f"unknown signal {signal!r}")
            sig = self.signals[signal]
            dim = self.dimension(p["dimension"], f"{ppath}.dimension")
            if dim != sig.dimension:
                _fail(f"{ppath}.dimension", f"does not match signal {signal!r}")
            params[pname] = ParamDef(pname, signal, dim, sig.index_range)

        def resolve(kind, ref, index, rpath):
            if kind == "param":
                if ref not in params:
                    _fail(rpath, f"undeclared parameter {ref!r}")
                p = params[ref]
                if isinstance(index, str):
                    _fail(rpath, "parameters take integer indices only")
                if p.index_range is not None and index is None:
                    _fail(rpath, f"parameter {ref!r} has components and needs an index")
                self._check_index(index, p.index_range, None, rpath)
                return p.dimension
            if index is not None:
                _fail(rpath, f"{kind} references cannot be indexed")
            if kind == "const":
                if ref not in self.constants:
                    _fail(rpath, f"unknown constant {ref!r}")
                return self.constants[ref].dimension
            if kind == "unit":
                if ref not in self.units:
                    _fail(rpath, f"unknown unit symbol {ref!r}")
                return self.units[ref].dimension
            _fail(rpath, "invariant bodies cannot reference signals directly")

        relations = []
        rels = _list(raw["relations"], f"{path}.relations")
        if not rels:
            _fail(f"{path}.relations", "an invariant needs at least one relation")
        for i, r in enumerate(rels):
            rpath = f"{path}.relations[{i}]"
            r = _obj(r, rpath, {"op", "lhs", "rhs"})
            if r["op"] not in RELATIONAL_OPS:
                _fail(f"{rpath}.op", f"unknown relational operator {r['op']!r}")
            lhs = self.expr(r["lhs"], f"{rpath}.lhs", resolve)
            rhs = self.expr(r["rhs"], f"{rpath}.rhs", resolve)
            if lhs.dim != rhs.dim:
                _fail(rpath, "relation is not dimensionally homogeneous")
            relations.append(RelationDef(lhs, r["op"], rhs))
        inv = InvariantDef(name, tuple(params.values()), tuple(relations))

        expected = _invariant_json(inv, self.basis)
        for key in ("dimension_matrix", "pi_groups"):
            if raw[key] != expected[key]:
                _fail(f"{path}.{key}", "does not match the invariant's parameters")
        return inv

    def load(self) -> NewtonIR:
        doc = self.doc
        if not isinstance(doc, dict):
            _fail("$", "expected an object")
        if doc.get("format_version") != FORMAT_VERSION:
            _fail("$.format_version", f"unsupported format version {doc.get('format_version')!r}")
        _obj(doc, "$", {"format_version", "fundamentals", "signals", "constants", "invariants"})
        for i, f in enumerate(_list(doc["fundamentals"], "$.fundamentals")):
            f = _str(f, f"$.fundamentals[{i}]")
            if f in self.basis:
                _fail(f"$.fundamentals[{i}]", f"duplicate fundamental {f!r}")
            self.basis.append(f)
        for i, raw in enumerate(_list(doc["signals"], "$.signals")):
            sig = self.signal(raw, f"$.signals[{i}]")
            self.signals[sig.name] = sig
            if sig.unit_symbol is not None:
                self.units[sig.unit_symbol] = sig
        n_fund = sum(1 for s in self.signals.values() if s.is_fundamental)
        if n_fund != len(self.basis):
            _fail("$.fundamentals", "every fundamental needs a fundamental signal entry")
        for i, raw in enumerate(_list(doc["constants"], "$.constants")):
            path = f"$.constants[{i}]"
            raw = _obj(raw, path, {"name", "value", "dimension"})
            name = _str(raw["name"], f"{path}.name")
            self.claim(name, f"{path}.name")
            self.constants[name] = ConstantDef(
                name, _real(raw["value"], f"{path}.value"), self.dimension(raw["dimension"], f"{path}.dimension")
            )
        invariants = [
            self.invariant(raw, f"$.invariants[{i}]")
            for i, raw in enumerate(_list(doc["invariants"], "$.invariants"))
        ]
        return NewtonIR(
            tuple(self.basis),
            tuple(self.signals.values()),
            tuple(self.constants.values()),
            tuple(invariants),
        )


def load_ir(text: str) -> NewtonIR:
    """Parse and validate an IR document; raises LoadError with a JSON path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise LoadError("$", f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from None
    return _Loader(doc).load()
