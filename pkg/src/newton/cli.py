"""``newtonc``: command-line driver.

Exit status: 0 success, 1 specification errors / failed checks / unknown
invariant, 2 I/O problems, malformed sample files or bad usage. Payload goes to
stdout, diagnostics and summaries to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from newton.compiler import compile_sources, stdlib_source
from newton.diagnostics import CompileError, UnknownInvariant
from newton.interchange import emit_ir
from newton.ir import NewtonIR
from newton.pi_analysis import dimension_matrix, pi_groups, rank
from newton.runtime import (
    SampleFormatError,
    ToleranceConfig,
    check_stream,
    load_samples,
    parse_samples,
    query_invariant,
)

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class _Exit(Exception):
    def __init__(self, status: int):
        self.status = status


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _jsonl(obj) -> None:
    print(json.dumps(obj, allow_nan=False), flush=True)


def _load_spec(args) -> NewtonIR:
    units = []
    try:
        if args.stdlib:
            units.append(stdlib_source())
        units.append((Path(args.spec).read_text(encoding="utf-8"), args.spec))
    except (OSError, UnicodeDecodeError) as err:
        _err(f"newtonc: cannot read specification: {err}")
        raise _Exit(EXIT_IO) from None
    try:
        return compile_sources(units)
    except CompileError as err:
        for d in err.diagnostics:
            _err(d.format())
        if getattr(args, "json", False) and args.command == "check":
            _jsonl({"ok": False, "errors": len(err.diagnostics)})
        raise _Exit(EXIT_FAIL) from None


def _invariant(ir: NewtonIR, name: str):
    try:
        return ir.invariant(name)
    except UnknownInvariant as err:
        _err(f"newtonc: {err}")
        raise _Exit(EXIT_FAIL) from None


def cmd_check(args) -> int:
    ir = _load_spec(args)
    counts = (len(ir.signals), len(ir.constants), len(ir.invariants))
    if args.json:
        _jsonl({"ok": True, "signals": counts[0], "constants": counts[1], "invariants": counts[2]})
    else:
        print("OK: {} signals, {} constants, {} invariants".format(*counts))
    return EXIT_OK


def cmd_pi(args) -> int:
    ir = _load_spec(args)
    inv = _invariant(ir, args.invariant)
    include = not args.no_constants
    m = dimension_matrix(inv, include)
    n, k = m.n, rank(m)
    groups = pi_groups(inv, include)
    if args.json:
        base = {"invariant": inv.name, "n": n, "k": k}
        for i, g in enumerate(groups):
            _jsonl({**base, "index": i, "exponents": g.as_dict(), "monomial": g.monomial()})
        if not groups:
            # keep n and k visible even when nothing is dimensionless
            _jsonl({**base, "index": None, "exponents": None, "monomial": None})
    else:
        print(f"n={n} k={k}")
        for i, g in enumerate(groups):
            print(f"pi_{i} = {g.monomial()}")
    return EXIT_OK


def cmd_info(args) -> int:
    ir = _load_spec(args)
    _invariant(ir, args.invariant)
    info = query_invariant(ir, args.invariant, not args.no_constants)
    if args.json:
        _jsonl(info.to_json())
        return EXIT_OK
    print(f"invariant {info.name}")
    for p in info.params:
        dim = "{" + ", ".join(f"{b}:{e}" for b, e in p.dimension) + "}"
        unit = f" [{p.unit_symbol}]" if p.unit_symbol else ""
        comps = f" x{p.components}" if p.components > 1 else ""
        print(f"  {p.name}: {p.signal}{unit}{comps} {dim}")
    print(f"relations: {info.relation_count} ({' '.join(info.operators)})")
    for i, g in enumerate(info.pi_groups):
        print(f"pi_{i} = {g}")
    return EXIT_OK


def cmd_eval(args) -> int:
    ir = _load_spec(args)
    _invariant(ir, args.invariant)
    try:
        if args.samples == "-":
            fmt = "csv" if args.format == "csv" else "jsonl"
            records = parse_samples(sys.stdin.read(), fmt)
        elif args.format:
            records = parse_samples(Path(args.samples).read_text(encoding="utf-8"), args.format)
        else:
            records = load_samples(args.samples)
    except (OSError, UnicodeDecodeError) as err:
        _err(f"newtonc: cannot read samples: {err}")
        return EXIT_IO
    except SampleFormatError as err:
        _err(f"newtonc: malformed sample file: {err}")
        return EXIT_IO
    tol = ToleranceConfig(args.rel_tol, args.abs_tol)
    checked = passed = 0
    for result in check_stream(ir, args.invariant, records, tol):
        checked += 1
        passed += result.passed
        _jsonl(result.to_json())
    _err(f"checked={checked} passed={passed} failed={checked - passed}")
    return EXIT_OK if passed == checked else EXIT_FAIL


def cmd_emit_ir(args) -> int:
    ir = _load_spec(args)
    text = emit_ir(ir)
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.output).write_text(text, encoding="utf-8")
    except OSError as err:
        _err(f"newtonc: cannot write {args.output}: {err}")
        return EXIT_IO
    return EXIT_OK


def _tolerance(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not math.isfinite(x) or x < 0:
        raise argparse.ArgumentTypeError(f"tolerance must be finite and >= 0: {value!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--stdlib",
        action="store_true",
        help="prepend the standard signal definitions ($NEWTON_STDLIB overrides the bundled file)",
    )
    common.add_argument("--json", action="store_true", help="machine-readable JSON-lines output")

    parser = argparse.ArgumentParser(prog="newtonc", description="Newton specification compiler")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check", parents=[common], help="parse and dimension-check a specification")
    p.add_argument("spec")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pi", parents=[common], help="Buckingham Pi groups of an invariant")
    p.add_argument("spec")
    p.add_argument("invariant")
    p.add_argument(
        "--no-constants",
        action="store_true",
        help="leave dimensioned constants out of the quantity list",
    )
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("info", parents=[common], help="describe an invariant")
    p.add_argument("spec")
    p.add_argument("invariant")
    p.add_argument("--no-constants", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("eval", parents=[common], help="check sample records against an invariant")
    p.add_argument("spec")
    p.add_argument("invariant")
    p.add_argument("samples", help="JSON-lines or .csv file, or - for stdin")
    p.add_argument("--format", choices=("jsonl", "csv"), help="override format detection")
    p.add_argument("--rel-tol", type=_tolerance, default=ToleranceConfig.rel, help="relative tolerance for ~")
    p.add_argument("--abs-tol", type=_tolerance, default=ToleranceConfig.abs, help="absolute floor for ~")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("emit-ir", parents=[common], help="write the JSON intermediate representation")
    p.add_argument("spec")
    p.add_argument("-o", "--output", help="output path, or - for stdout (default)")
    p.set_defaults(func=cmd_emit_ir)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as e:
        return e.status


if __name__ == "__main__":
    sys.exit(main())
