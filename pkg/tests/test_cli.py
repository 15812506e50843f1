import json
import subprocess
import sys

import pytest

from helpers import FIXTURES, fixture_text
from newton.cli import main

PENDULUM = str(FIXTURES / "pendulum.newton")
SPEED = str(FIXTURES / "distance_speed.newton")


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


@pytest.fixture
def bad_spec(tmp_path):
    src = fixture_text("pendulum.newton").replace("period ~ 2*Pi*((L/g)**(1/2))", "period ~ L")
    path = tmp_path / "bad.newton"
    path.write_text(src)
    return str(path)


@pytest.fixture
def samples(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_text(
        '{"L": 9.8, "period": 6.28}\n{"L": 9.8, "period": 7.5}\n{"L": 2.45, "period": 3.14, "t": 2}\n'
    )
    return str(path)


def test_check_pendulum(capsys):
    status, out, err = run(capsys, "check", PENDULUM)
    assert (status, out, err) == (0, "OK: 3 signals, 2 constants, 1 invariants\n", "")


def test_check_speed(capsys):
    assert run(capsys, "check", SPEED)[:2] == (0, "OK: 3 signals, 0 constants, 0 invariants\n")


def test_check_empty(capsys, tmp_path):
    (tmp_path / "e.newton").write_text("")
    assert run(capsys, "check", str(tmp_path / "e.newton"))[:2] == (0, "OK: 0 signals, 0 constants, 0 invariants\n")


def test_check_mismatch(capsys, bad_spec):
    status, out, err = run(capsys, "check", bad_spec)
    assert status == 1 and out == ""
    lines = err.splitlines()
    assert len(lines) == 1 and "DimensionMismatch" in lines[0]
    assert lines[0].startswith(f"{bad_spec}:23:4: error:")


def test_check_syntax_error(capsys, tmp_path):
    (tmp_path / "x.newton").write_text("a : constant = ;\n")
    status, _, err = run(capsys, "check", str(tmp_path / "x.newton"))
    assert status == 1 and ":1:16: error: ParseError" in err


def test_check_lex_error(capsys, tmp_path):
    (tmp_path / "x.newton").write_text("a : constant = $;\n")
    status, _, err = run(capsys, "check", str(tmp_path / "x.newton"))
    assert status == 1 and "LexError" in err


def test_check_missing_file(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "nope.newton"))[0] == 2


def test_check_json(capsys, bad_spec):
    status, out, _ = run(capsys, "check", "--json", PENDULUM)
    assert json.loads(out) == {"ok": True, "signals": 3, "constants": 2, "invariants": 1}
    status, out, _ = run(capsys, "check", "--json", bad_spec)
    assert status == 1 and json.loads(out) == {"ok": False, "errors": 1}


def test_pi_pendulum(capsys):
    status, out, _ = run(capsys, "pi", PENDULUM, "pendulum")
    assert status == 0
    assert out.splitlines() == ["n=3 k=2", "pi_0 = period^2 * g * L^-1"]


def test_pi_without_constants(capsys):
    status, out, _ = run(capsys, "pi", PENDULUM, "pendulum", "--no-constants")
    assert out.splitlines() == ["n=2 k=2"]


def test_pi_dimensionless(capsys, tmp_path):
    (tmp_path / "d.newton").write_text("r: signal = { derivation = none; }\nq: signal = { derivation = r / r; }\n"
                                       "p: invariant(a: q, b: q) = { a < b }\n")
    status, out, _ = run(capsys, "pi", str(tmp_path / "d.newton"), "p")
    assert out.splitlines() == ["n=2 k=0", "pi_0 = a", "pi_1 = b"]


def test_pi_json(capsys):
    status, out, _ = run(capsys, "pi", "--json", PENDULUM, "pendulum")
    (rec,) = [json.loads(line) for line in out.splitlines()]
    assert rec["exponents"] == {"L": -1, "period": 2, "g": 1} and (rec["n"], rec["k"]) == (3, 2)


def test_pi_json_without_groups(capsys):
    _, out, _ = run(capsys, "pi", "--json", PENDULUM, "pendulum", "--no-constants")
    assert json.loads(out) == {"invariant": "pendulum", "n": 2, "k": 2, "index": None, "exponents": None, "monomial": None}


def test_pi_unknown_invariant(capsys):
    status, out, err = run(capsys, "pi", PENDULUM, "nope")
    assert status == 1 and out == "" and "nope" in err


def test_info(capsys):
    status, out, _ = run(capsys, "info", PENDULUM, "pendulum")
    assert status == 0
    assert "L: length [m] {length:1}" in out and "relations: 1 (~)" in out
    status, out, _ = run(capsys, "info", "--json", PENDULUM, "pendulum")
    info = json.loads(out)
    assert [(p["name"], p["signal"], p["unit_symbol"]) for p in info["params"]] == [("L", "length", "m"), ("period", "time", "s")]
    assert run(capsys, "info", SPEED, "speed")[0] == 1


def test_eval_one_bad_record(capsys, samples):
    status, out, err = run(capsys, "eval", PENDULUM, "pendulum", samples)
    assert status == 1
    results = [json.loads(line) for line in out.splitlines()]
    assert [r["pass"] for r in results] == [True, False, True]
    assert err.strip() == "checked=3 passed=2 failed=1"


def test_eval_empty(capsys, tmp_path):
    (tmp_path / "e.jsonl").write_text("")
    status, out, err = run(capsys, "eval", PENDULUM, "pendulum", str(tmp_path / "e.jsonl"))
    assert (status, out, err.strip()) == (0, "", "checked=0 passed=0 failed=0")


def test_eval_missing_key_continues(capsys, tmp_path):
    (tmp_path / "m.jsonl").write_text('{"L": 9.8}\n{"L": 9.8, "period": 6.28}\n')
    status, out, err = run(capsys, "eval", PENDULUM, "pendulum", str(tmp_path / "m.jsonl"))
    first, second = [json.loads(line) for line in out.splitlines()]
    assert not first["pass"] and "UnboundIdentifier" in first["relations"][0]["reason"]
    assert second["pass"] and status == 1


def test_eval_csv_and_tolerance(capsys, tmp_path):
    (tmp_path / "s.csv").write_text("L,period\n9.8,6.5\n")
    assert run(capsys, "eval", PENDULUM, "pendulum", str(tmp_path / "s.csv"))[0] == 1
    assert run(capsys, "eval", PENDULUM, "pendulum", str(tmp_path / "s.csv"), "--rel-tol", "0.05")[0] == 0


def test_eval_malformed_file(capsys, tmp_path):
    (tmp_path / "b.jsonl").write_text("{oops\n")
    status, out, err = run(capsys, "eval", PENDULUM, "pendulum", str(tmp_path / "b.jsonl"))
    assert status == 2 and out == "" and "malformed" in err


def test_eval_rejects_negative_tolerance(capsys, samples):
    with pytest.raises(SystemExit) as exc:
        main(["eval", PENDULUM, "pendulum", samples, "--rel-tol", "-1"])
    assert exc.value.code == 2


def test_emit_ir_stdout_matches_fixture(capsys):
    status, out, _ = run(capsys, "emit-ir", PENDULUM, "-o", "-")
    assert status == 0 and out == fixture_text("pendulum.ir.json")
    assert run(capsys, "emit-ir", PENDULUM)[1] == out


def test_emit_ir_to_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    assert run(capsys, "emit-ir", PENDULUM, "-o", str(target))[0] == 0
    assert target.read_text() == fixture_text("pendulum.ir.json")


def test_emit_ir_invalid_spec_writes_nothing(capsys, bad_spec, tmp_path):
    target = tmp_path / "out.json"
    status, out, _ = run(capsys, "emit-ir", bad_spec, "-o", str(target))
    assert status == 1 and out == "" and not target.exists()


def test_emit_ir_write_failure(capsys, tmp_path):
    assert run(capsys, "emit-ir", PENDULUM, "-o", str(tmp_path / "missing" / "x.json"))[0] == 2


def test_stdlib_flag(capsys, tmp_path, monkeypatch):
    (tmp_path / "p.newton").write_text("k : constant = 2 * m / s;\np: invariant(x: length) = { x ~ 1*m }\n")
    assert run(capsys, "check", "--stdlib", str(tmp_path / "p.newton"))[:2] == (0, "OK: 3 signals, 1 constants, 1 invariants\n")
    assert run(capsys, "check", str(tmp_path / "p.newton"))[0] == 1
    alt = tmp_path / "alt.newton"
    alt.write_text("length: signal = { symbol = m; derivation = none; }\ntime: signal = { symbol = s; derivation = none; }\n")
    monkeypatch.setenv("NEWTON_STDLIB", str(alt))
    assert run(capsys, "check", "--stdlib", str(tmp_path / "p.newton"))[:2] == (0, "OK: 2 signals, 1 constants, 1 invariants\n")


def test_json_output_is_json_lines(capsys, samples):
    for argv in (
        ["check", "--json", PENDULUM],
        ["pi", "--json", PENDULUM, "pendulum"],
        ["info", "--json", PENDULUM, "pendulum"],
        ["eval", "--json", PENDULUM, "pendulum", samples],
    ):
        _, out, _ = run(capsys, *argv)
        for line in out.splitlines():
            json.loads(line)


def test_module_and_entry_point():
    proc = subprocess.run([sys.executable, "-m", "newton", "check", PENDULUM], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "OK: 3 signals, 2 constants, 1 invariants\n"
    proc = subprocess.run([sys.executable, "-m", "newton"], capture_output=True, text=True)
    assert proc.returncode == 2
