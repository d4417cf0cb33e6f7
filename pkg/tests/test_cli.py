import csv
import io
import json
import re
import subprocess
import sys

import pytest

from fibquadrics.cli import run
from fibquadrics.compositions import fibonacci
from fibquadrics.topology import poincare_closed_form

from _oracles import transitive_reduction


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_enumerate_text_and_json():
    code, out, _ = call("enumerate", "3")
    assert code == 0 and out == "1,1,1\n3\n"
    code, out, _ = call("enumerate", "6", "--format", "json")
    assert len(json.loads(out)) == 8


def test_enumerate_zero():
    code, _, err = call("enumerate", "0")
    assert code == 1 and "allow-empty" in err
    code, out, _ = call("enumerate", "0", "--allow-empty")
    assert code == 0 and out == "\n"


@pytest.mark.parametrize("argv", [
    ["enumerate", "-1"],
    ["hasse", "0"],
    ["hasse", "abc"],
    ["poincare", "65"],
    ["meet", "6", "5,1", "3,1"],
    ["meet", "6", "5,x", "3,3"],
    ["meet", "6", "4,2", "3,3"],
    ["sequences", "--from", "5", "--to", "3"],
    ["nonsense"],
])
def test_domain_errors_exit_one(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_max_nodes_budget():
    code, _, err = call("hasse", "30", "--max-nodes", "1000")
    assert code == 1 and "max-nodes" in err


def test_meet():
    assert call("meet", "6", "5,1", "3,3")[1] == "3,1,1,1\n"
    assert call("meet", "6", "5,1", "1,5", "--method", "recursive")[1] == "1,1,1,1,1,1\n"


def test_poincare_methods_agree():
    outs = {call("poincare", "9", "--method", m)[1] for m in ("closed", "cells", "recurrence")}
    assert outs == {"1 + 7q + 15q^2 + 10q^3 + q^4\n"}
    assert json.loads(call("poincare", "6", "--format", "json")[1]) == {"n": 6, "coeffs": [1, 4, 3]}
    assert call("poincare", "2")[1] == "1\n"


def test_components():
    obj = json.loads(call("components", "6", "--format", "json")[1])
    assert obj["count"] == obj["recurrence"] == 4
    assert sorted(obj["dimensions"]) == [1, 2, 2, 2]
    code, out, _ = call("components", "40", "--max-nodes", "100")
    assert code == 0 and "not listed" in out


def test_hasse_formats():
    obj = json.loads(call("hasse", "6", "--format", "json")[1])
    nodes = [tuple(x) for x in obj["nodes"]]
    assert {(nodes[a], nodes[b]) for a, b in obj["edges"]} == transitive_reduction(6)
    dot = call("hasse", "6", "--format", "dot")[1]
    assert dot.startswith("graph hasse_6 {") and dot.count(" -- ") == 8
    assert call("hasse", "3")[1] == "rank 1: 3\nrank 0: 111\nedges:\n  111 < 3\n"


def test_sequences_csv_identities():
    code, out, _ = call("sequences", "--to", "25", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "fib", "a_direct", "a_recur", "a_gf", "a_alt", "poincare"]
    assert len(rows) == 25
    for r in rows:
        n = int(r["n"])
        assert int(r["fib"]) == fibonacci(n)
        assert r["a_direct"] == r["a_recur"] == r["a_gf"]
        if n >= 3:
            assert r["a_alt"] == r["a_direct"]
        else:
            assert r["a_alt"] == ""
        coeffs = [int(c) for c in r["poincare"].split(",")]
        assert sum(coeffs) == int(r["fib"])
        assert tuple(coeffs) == poincare_closed_form(n).coeffs


def test_sequences_json_and_text():
    rows = json.loads(call("sequences", "--from", "3", "--to", "6", "--format", "json")[1])
    assert [r["n"] for r in rows] == [3, 4, 5, 6]
    assert rows[-1]["poincare"] == [1, 4, 3]
    text = call("sequences", "--from", "6", "--to", "6")[1]
    assert text == "n=6 fib=8 a=4/4/4/4 P=[1,4,3]\n"


def test_verify_exit_codes():
    code, out, _ = call("verify", "--n-max", "6")
    assert code == 0
    assert out.startswith("TAP version 13\n1..")
    assert "not ok" not in out
    assert "# 27 passed, 0 failed" in out


def test_verify_is_deterministic():
    assert call("verify", "--n-max", "5")[1] == call("verify", "--n-max", "5")[1]


def test_verify_timing_flag():
    out = call("verify", "--n-max", "4", "--timing")[1]
    assert re.search(r"PASS \[\d+\.\d{3}s\]", out)


def test_output_is_deterministic_and_out_flag(tmp_path):
    target = tmp_path / "h.dot"
    assert call("hasse", "7", "--format", "dot", "--out", str(target))[1] == ""
    first = target.read_bytes()
    call("hasse", "7", "--format", "dot", "--out", str(target))
    assert target.read_bytes() == first == call("hasse", "7", "--format", "dot")[1].encode()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fibquadrics", "meet", "6", "5,1", "3,3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "3,1,1,1\n"
    proc = subprocess.run([sys.executable, "-m", "fibquadrics", "hasse", "0"], capture_output=True, text=True)
    assert proc.returncode == 1
