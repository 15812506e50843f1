"""Runtime invariant checking against numeric sensor samples.

Sample values are taken to be in the declared unit of each parameter's signal
(meters for a ``length`` declared with symbol ``m``, and so on); no unit
conversion is ever applied. Unit symbols evaluate to 1.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from newton.diagnostics import DomainError, EvalError, NewtonError, UnboundIdentifier
from newton.ir import InvariantDef, NewtonIR, TBin, TNeg, TNum, TPow, TRef, TypedExpr
from newton.pi_analysis import pi_groups


class SampleFormatError(NewtonError):
    """A sample file could not be read as JSON-lines or CSV."""


@dataclass(frozen=True)
class ToleranceConfig:
    rel: float = 0.01
    abs: float = 1e-12

    def __post_init__(self):
        for label, v in (("relative", self.rel), ("absolute", self.abs)):
            if not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
                raise ValueError(f"{label} tolerance must be finite and >= 0, got {v!r}")


@dataclass(frozen=True)
class SampleRecord:
    values: Mapping[str, object]
    t: float | None = None

    @classmethod
    def from_mapping(cls, obj: Mapping[str, object]) -> SampleRecord:
        values = {k: v for k, v in obj.items() if k != "t"}
        return cls(values, obj.get("t"))


@dataclass(frozen=True)
class RelationResult:
    index: int
    op: str
    passed: bool
    lhs: float | None
    rhs: float | None
    residual: float | None
    reason: str | None = None

    def to_json(self) -> dict:
        out = {
            "index": self.index,
            "pass": self.passed,
            "lhs": _json_float(self.lhs),
            "rhs": _json_float(self.rhs),
            "residual": _json_float(self.residual),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class CheckResult:
    invariant: str
    passed: bool
    relations: tuple[RelationResult, ...] = ()
    reason: str | None = None
    t: float | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {
            "invariant": self.invariant,
            "pass": self.passed,
            "relations": [r.to_json() for r in self.relations],
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.t is not None:
            out["t"] = self.t
        return out


def _json_float(x: float | None):
    # JSON has no inf/nan
    if x is None or not math.isfinite(x):
        return None if x is None else str(x)
    return x


# -- evaluation ---------------------------------------------------------------


def real_power(x: float, exponent: Fraction) -> float:
    """Real ``q``-th root of ``x ** p`` for ``exponent = p/q``."""
    p, q = exponent.numerator, exponent.denominator
    try:
        if q == 1:
            return x**p
        if x < 0:
            if q % 2 == 0:
                raise DomainError(f"even root ({exponent}) of negative value {x!r}")
            magnitude = (-x) ** (p / q)
            return -magnitude if p % 2 else magnitude
        return x ** (p / q)
    except ZeroDivisionError:
        raise DomainError(f"0 raised to negative power {exponent}") from None
    except OverflowError:
        return math.inf


def eval_expr(
    e: TypedExpr, bindings: Mapping[str, object], constants: Mapping[str, float]
) -> float:
    """Evaluate a typed expression in IEEE double precision.

    ``bindings`` maps parameter keys (``L``, ``v@0``) to numbers and
    ``constants`` maps constant names to their values. Raises
    UnboundIdentifier or DomainError.
    """
    if isinstance(e, TNum):
        return e.value
    if isinstance(e, TRef):
        if e.kind == "unit":
            return 1.0
        table = constants if e.kind == "const" else bindings
        key = e.name if e.kind == "const" else e.key
        if key not in table:
            raise UnboundIdentifier(f"no value bound for {key!r}")
        return _as_float(key, table[key])
    if isinstance(e, TNeg):
        return -eval_expr(e.operand, bindings, constants)
    if isinstance(e, TPow):
        return real_power(eval_expr(e.base, bindings, constants), e.exponent)
    if isinstance(e, TBin):
        a = eval_expr(e.lhs, bindings, constants)
        b = eval_expr(e.rhs, bindings, constants)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:
            raise DomainError("division by zero")
        return a / b
    raise TypeError(f"not a typed expression: {e!r}")


def _as_float(key: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvalError(f"value for {key!r} is not a number: {value!r}")
    return float(value)


# -- checking -----------------------------------------------------------------


def relative_residual(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else abs(lhs - rhs) / scale


def compare(op: str, lhs: float, rhs: float, tol: ToleranceConfig) -> bool:
    if op == "~":
        return abs(lhs - rhs) <= max(tol.abs, tol.rel * max(abs(lhs), abs(rhs)))
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == ">":
        return lhs > rhs
    if op == ">=":
        return lhs >= rhs
    if op == "==":
        return lhs == rhs
    raise ValueError(f"unknown relational operator {op!r}")


def check_invariant(
    inv: InvariantDef,
    rec: SampleRecord | Mapping[str, object],
    tol: ToleranceConfig = ToleranceConfig(),
    constants: Mapping[str, float] | None = None,
) -> CheckResult:
    """Evaluate every relation of ``inv`` on one record; the result passes iff all do.

    Evaluation errors mark the affected relation as failed with a reason.
    """
    if not isinstance(rec, SampleRecord):
        rec = SampleRecord.from_mapping(rec)
    constants = constants or {}
    results = []
    for i, rel in enumerate(inv.relations):
        try:
            lhs = eval_expr(rel.lhs, rec.values, constants)
            rhs = eval_expr(rel.rhs, rec.values, constants)
        except EvalError as err:
            results.append(RelationResult(i, rel.op, False, None, None, None, f"{err.code}: {err}"))
            continue
        if math.isnan(lhs) or math.isnan(rhs):
            results.append(RelationResult(i, rel.op, False, lhs, rhs, None, "DomainError: NaN"))
            continue
        residual = relative_residual(lhs, rhs) if math.isfinite(lhs - rhs) else math.inf
        results.append(RelationResult(i, rel.op, compare(rel.op, lhs, rhs, tol), lhs, rhs, residual))
    return CheckResult(inv.name, all(r.passed for r in results), tuple(results), t=rec.t)


def check_stream(
    ir: NewtonIR,
    invariant: str,
    records: Iterable[SampleRecord | Mapping[str, object]],
    tol: ToleranceConfig = ToleranceConfig(),
) -> Iterator[CheckResult]:
    """Lazily check each record in order.

    Raises UnknownInvariant immediately; a malformed record produces a failed
    result rather than stopping the stream.
    """
    inv = ir.invariant(invariant)
    constants = ir.constant_values()

    def results() -> Iterator[CheckResult]:
        for rec in records:
            if isinstance(rec, SampleRecord) or isinstance(rec, Mapping):
                yield check_invariant(inv, rec, tol, constants)
            else:
                yield CheckResult(inv.name, False, reason=f"malformed record: {rec!r}")

    return results()


# -- queries ------------------------------------------------------------------


@dataclass(frozen=True)
class ParamInfo:
    name: str
    signal: str
    unit_symbol: str | None
    dimension: tuple[tuple[str, str], ...]
    components: int = 1


@dataclass(frozen=True)
class InvariantInfo:
    name: str
    params: tuple[ParamInfo, ...]
    relation_count: int
    operators: tuple[str, ...]
    pi_groups: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": [
                {
                    "name": p.name,
                    "signal": p.signal,
                    "unit_symbol": p.unit_symbol,
                    "dimension": [list(pair) for pair in p.dimension],
                    "components": p.components,
                }
                for p in self.params
            ],
            "relation_count": self.relation_count,
            "operators": list(self.operators),
            "pi_groups": list(self.pi_groups),
        }


def query_invariant(ir: NewtonIR, name: str, include_constants: bool = True) -> InvariantInfo:
    inv = ir.invariant(name)
    params = []
    for p in inv.params:
        sig = ir.signal(p.signal)
        dims = tuple((ir.fundamentals[b], str(e)) for b, e in p.dimension.items())
        params.append(ParamInfo(p.name, p.signal, sig.unit_symbol, dims, sig.components))
    return InvariantInfo(
        inv.name,
        tuple(params),
        len(inv.relations),
        tuple(r.op for r in inv.relations),
        tuple(g.monomial() for g in pi_groups(inv, include_constants)),
    )


# -- sample files -------------------------------------------------------------


def parse_samples(text: str, fmt: str = "jsonl") -> list[SampleRecord]:
    """Parse JSON-lines (one object per line) or CSV with a header row."""
    if fmt == "csv":
        return _parse_csv(text)
    if fmt != "jsonl":
        raise ValueError(f"unknown sample format {fmt!r}")
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise SampleFormatError(f"line {lineno}: invalid JSON: {err.msg}") from None
        if not isinstance(obj, dict):
            raise SampleFormatError(f"line {lineno}: expected a JSON object")
        records.append(SampleRecord.from_mapping(obj))
    return records


def _csv_value(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell


def _parse_csv(text: str) -> list[SampleRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return []
    header = [h.strip() for h in header]
    records = []
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != len(header):
            raise SampleFormatError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        obj = {k: _csv_value(v.strip()) for k, v in zip(header, row) if v.strip()}
        records.append(SampleRecord.from_mapping(obj))
    return records


def load_samples(path: str | Path) -> list[SampleRecord]:
    path = Path(path)
    fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    return parse_samples(path.read_text(encoding="utf-8"), fmt)
