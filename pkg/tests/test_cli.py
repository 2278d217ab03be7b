import json
import subprocess
import sys

import pytest

from sigflow.algebra import Frac, X, frac_from_json, parse_poly
from sigflow.circuit import Feedback, parse, parse_file
from sigflow.cli import run
from sigflow.relation import Move, linrel_from_json, reindex
from sigflow.semantics import dsem, equivalent


@pytest.fixture
def sf(tmp_path):
    def write(text, name="t.sf"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_prints_sort(capsys, sf):
    assert call(capsys, "check", sf("copy")) == (0, "(1,2)\n", "")
    code, out, _ = call(capsys, "check", "--json", sf("copy"))
    assert json.loads(out) == {"sort": [1, 2]}


def test_parse_and_sort_errors_exit_one(capsys, sf):
    code, out, err = call(capsys, "check", sf("copy ; ("))
    assert code == 1 and "line 1" in err and out == ""
    code, _, err = call(capsys, "check", sf("copy ; copy"))
    assert code == 1 and "copy ; copy" in err
    code, _, _ = call(capsys, "check", "/no/such/file.sf")
    assert code == 1


def test_usage_errors_exit_one(capsys, sf):
    assert call(capsys, "frobnicate")[0] == 1
    assert call(capsys, "simulate", sf("id"))[0] == 1
    assert call(capsys, "simulate", sf("id"), "--steps", "2", "--in", "L1")[0] == 1
    assert call(capsys, "simulate", sf("id"), "--steps", "1", "--in", "L1=1,2")[0] == 1


def test_sem_json_round_trips(capsys, circuit_dir):
    path = str(circuit_dir / "fib.sf")
    code, out, _ = call(capsys, "sem", "--json", path, "--expand", "6")
    assert code == 0
    obj = json.loads(out)
    assert linrel_from_json(obj) == dsem(parse_file(path))
    assert obj["streams"] == [{"shift": 0, "left": [["1", "0", "0", "0", "0", "0"]],
                               "right": [["0", "1", "1", "2", "3", "5"]]}]
    code, out, _ = call(capsys, "sem", path)
    assert "x/(1 - x - x^2)" in out


def test_eq_exit_codes(capsys, circuit_dir, sf):
    c1, c2 = str(circuit_dir / "c1.sf"), str(circuit_dir / "c2.sf")
    assert call(capsys, "eq", c1, c2) == (0, "true\n", "")
    assert call(capsys, "eq", sf("delay", "a.sf"), sf("id", "b.sf"))[:2] == (2, "false\n")
    assert call(capsys, "eq", sf("copy", "a.sf"), sf("id", "b.sf"))[0] == 1


def test_classify(capsys, sf):
    code, out, _ = call(capsys, "classify", "--json", sf("delay ; codelay"))
    obj = json.loads(out)
    assert code == 0
    assert obj["cospan"] and not obj["span"]
    assert obj["state_total"] is False and obj["init_free"] is True
    assert set(obj) >= {"forward", "backward", "sf", "input_receptive"}


def test_simulate_fibonacci(capsys, circuit_dir):
    path = str(circuit_dir / "fib_realised.sf")
    code, out, _ = call(capsys, "simulate", path, "--steps", "6", "--in", "L1=1,0,0,0,0,0")
    assert code == 0 and "R1: 0, 1, 1, 2, 3, 5" in out
    code, out, _ = call(capsys, "simulate", "--json", path, "--steps", "6", "--in", "L1=1")
    obj = json.loads(out)
    assert [s["out"] for s in obj["steps"]] == [["0"], ["1"], ["1"], ["2"], ["3"], ["5"]]
    assert obj["deadlock"] is None and len(obj["registers"]) == 3
    assert obj["inputs"] == ["L1"] and obj["outputs"] == ["R1"]


def test_simulate_c3_states(capsys, circuit_dir):
    code, out, _ = call(capsys, "simulate", "--json", str(circuit_dir / "c3.sf"),
                        "--steps", "4", "--in", "L1=1,0,0,0")
    obj = json.loads(out)
    assert [s["out"][0] for s in obj["steps"]] == ["1", "2", "3", "4"]
    assert [s["state"] for s in obj["steps"]] == [["1", "2"], ["2", "3"], ["3", "4"], ["4", "5"]]


def test_simulate_deadlock_and_nondeterminism(capsys, sf):
    path = sf("delay ; codelay")
    code, out, _ = call(capsys, "simulate", path, "--steps", "3", "--in", "L1=1", "--in", "R1=0")
    assert code == 2 and "deadlock at step 1" in out
    code, _, err = call(capsys, "simulate", path, "--steps", "3", "--in", "L1=1")
    assert code == 1 and "realise" in err


def test_realise_json_schema(capsys, circuit_dir):
    path = str(circuit_dir / "fib.sf")
    code, out, _ = call(capsys, "realise", "--json", path)
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"inputs", "outputs", "transfer", "sf", "bends"}
    assert obj["inputs"] == ["L1"] and obj["outputs"] == ["R1"]
    assert frac_from_json(obj["transfer"][0][0]) == Frac(X, parse_poly("1 - x - x^2"))
    term = parse(obj["sf"])
    moves = [Move.from_json(m) for m in obj["bends"]]
    assert reindex(dsem(term), moves) == dsem(parse_file(path))


def test_realise_prefer_inputs(capsys, sf):
    path = sf("coptrans(1 - x)")
    code, out, _ = call(capsys, "realise", path, "--prefer-inputs", "L1")
    assert code == 0 and "inputs:  L1" in out and "1/(1 - x)" in out
    code, _, err = call(capsys, "realise", sf("zero"), "--prefer-inputs", "R1")
    assert code == 1 and "R1" in err


def test_trace_form(capsys, sf):
    code, out, _ = call(capsys, "trace-form", "--json", sf("delay"))
    assert json.loads(out) == {"z": 1, "core": "swap"}
    assert call(capsys, "trace-form", sf("codelay"))[0] == 1


def test_trace_form_output_is_equivalent(capsys, circuit_dir):
    path = str(circuit_dir / "fib_realised.sf")
    obj = json.loads(call(capsys, "trace-form", "--json", path)[1])
    t = parse(obj["core"])
    for _ in range(obj["z"]):
        t = Feedback(t)
    assert equivalent(t, parse_file(path))


def test_transfer_verb(capsys, circuit_dir):
    code, out, _ = call(capsys, "transfer", str(circuit_dir / "fib_realised.sf"), "--expand", "6")
    assert code == 0
    assert out.splitlines() == ["x/(1 - x - x^2)", "0, 1, 1, 2, 3, 5"]
    # c3 closes its loop with explicit cap and cup, so it is not a signal flow graph
    assert call(capsys, "transfer", str(circuit_dir / "c3.sf"))[0] == 1


def test_axioms(capsys):
    code, out, _ = call(capsys, "axioms", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["failed"] == 0 and obj["passed"] >= 150


def test_module_entry_point(circuit_dir):
    proc = subprocess.run([sys.executable, "-m", "sigflow", "check", str(circuit_dir / "fib.sf")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "(1,1)"
