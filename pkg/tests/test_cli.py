import json
import os
import subprocess
import sys

import pytest

from dglue.cli import main, run
from dglue.presentation import data_path

WEDGE = str(data_path("wedge.dg"))


def test_suite_exit_zero(capsys):
    assert main(["suite", "leibniz", "--seed", "7", "--samples", "64", "--tol", "1e-9"]) == 0
    assert "OK: 5/5" in capsys.readouterr().out


def test_report_is_byte_identical(tmp_path):
    for name in ("a.json", "b.json"):
        assert main(["suite", "metric", "--seed", "11", "--report", str(tmp_path / name)]) == 0
    a, b = ((tmp_path / n).read_bytes() for n in ("a.json", "b.json"))
    assert a == b
    doc = json.loads(a)
    assert doc["schema_version"] == "dglue-report/1"
    assert [c["name"] for c in doc["checks"]] == sorted(c["name"] for c in doc["checks"])


def test_check_and_induce_on_wedge(capsys):
    assert main(["check", WEDGE]) == 0
    assert main(["induce-connection", WEDGE]) == 0
    out = capsys.readouterr().out
    assert "i2(f(Y))" in out and "i2(X2 \\ f(Y))" in out


def test_failing_check_exits_nonzero(tmp_path):
    doc = json.loads(data_path("wedge.dg").read_text())
    doc["sections"]["s2"]["components"] = ["2 + x"]
    path = tmp_path / "bad.dg"
    path.write_text(json.dumps(doc))
    code, report, _ = run(["check", str(path)])
    assert code == 1
    failed = [c for c in report["checks"] if not c["passed"]]
    assert [c["name"] for c in failed] == ["sections_compatible#0"]


def test_complement_flag_changes_splitting(tmp_path):
    doc = {"schema_version": 1, "pieces": {"X1": {}, "X2": {}},
           "gluing": {"first": "X1", "second": "X2", "points": [[-1, 0], [1, 0]]},
           "bundles": {"V1": {"base": "X1", "rank": 2}, "V2": {"base": "X2", "rank": 1}},
           "fibre_map": {"points": {"-1": [[1, 0]], "1": [[1, 0]]}},
           "sections": {"s": {"bundle": "V1", "components": ["x^2", "sin(x)"]}},
           "checks": [{"kind": "reduced_round_trip", "section": "s"}]}
    path = tmp_path / "k.dg"
    path.write_text(json.dumps(doc))
    assert run(["check", str(path), "--complement", "*=1,1"])[0] == 0
    assert run(["check", str(path), "--complement", "*=0,1"])[0] == 1


@pytest.mark.parametrize("demo", ["wedge", "delta", "dim-witness"])
def test_demos_pass(demo):
    assert run(["demo", demo])[0] == 0


def test_parse_failure_is_reported():
    code, report, _ = run(["check", "/nonexistent.dg"])
    assert code == 1 and report["checks"][0]["name"] == "parse_presentation"


def test_pure_python_fallback_subprocess():
    env = dict(os.environ, DGLUE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import dglue; print(dglue.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    out = subprocess.run([sys.executable, "-m", "dglue.cli", "suite", "compat"],
                         env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stdout + out.stderr
