import json
import shutil
import subprocess
from pathlib import Path

import pytest

from crndep.cli import main

NETWORKS = Path(__file__).resolve().parent.parent / "networks"
EX1 = str(NETWORKS / "example1.crn")
EX2 = str(NETWORKS / "example2.crn")
EX3 = str(NETWORKS / "example3.crn")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", EX1)
    assert code == 0
    lines = [ln.strip() for ln in out.splitlines()]
    assert "delta = 2" in lines and "d = 1" in lines and "b_tilde = (4, -1, -3)" in lines


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", EX2, "--json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["structural"]["l"], doc["structural"]["t"], doc["structural"]["t_prime"]) == (1, 2, 1)
    assert doc["decomposition"]["ell"] == 1


def test_check_exit_codes(capsys):
    assert run(capsys, "check", EX1, "--theorem", "dep1")[0] == 0
    assert run(capsys, "check", EX1, "--theorem", "def1")[0] == 2
    assert run(capsys, "check", EX2, "--theorem", "dep1", "--k", "k15=4")[0] == 2
    assert run(capsys, "check", EX3, "--theorem", "dep1", "--k", "k32=3")[0] == 0
    assert run(capsys, "check", EX3, "--theorem", "dep1")[0] == 2


def test_check_disjoint_pairs(tmp_path, capsys):
    p = tmp_path / "pairs.crn"
    p.write_text("X1 <-> X2, kf = 1, kr = 1\nX3 <-> X4, kf = 1, kr = 1\n")
    code, out, _ = run(capsys, "check", str(p), "--theorem", "dep1")
    assert code == 0 and "ell = 2" in out


def test_check_not_applicable(tmp_path, capsys):
    # the two reaction vectors cancel, so one kernel class spans two separate components
    p = tmp_path / "na.crn"
    p.write_text("X1 -> X2, k = 1\n2 X2 -> X1 + X2, k = 1\n")
    code, out, _ = run(capsys, "check", str(p), "--theorem", "dep1")
    assert code == 3 and "not connected" in out
    assert run(capsys, "check", str(p), "--theorem", "def1")[0] == 3


def test_check_json_verdict(capsys):
    code, out, _ = run(capsys, "check", EX1, "--theorem", "dep1", "--json")
    (v,) = json.loads(out)["verdicts"]
    assert v["status"] == "pass" and v["conclusion"] == "unique per stoichiometric class"


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", EX1, "--anchor", "X1=1,X2=1", "--json")
    eq = json.loads(out)["equilibrium"]
    assert code == 0 and eq["residual"] <= 1e-8
    assert eq["x"] == pytest.approx([1.39533699447, 0.513619829564], rel=1e-10)
    code, out, _ = run(capsys, "solve", EX3, "--anchor", "x1=1,x2=1", "--k", "k32=3", "--class", "kinetic")
    assert code == 0 and "x = (1, 2)" in out


def test_solve_refuses(capsys):
    code, _, err = run(capsys, "solve", EX2, "--anchor", "1,1", "--k", "k15=4")
    assert code == 2 and "cannot solve" in err


def test_salt(capsys):
    code, out, _ = run(capsys, "salt", EX2)
    assert code == 0 and "[pass] partial sums >= 0 on T" in out
    code, out, _ = run(capsys, "salt", EX2, "--json")
    (cert,) = json.loads(out)
    assert all(cert["claims"].values())


def test_verify_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("CRN_SEED", "11")
    code, out, _ = run(capsys, "verify", EX2, "--fuzz", "3", "--seed", "1")
    assert code == 0 and out.startswith("seed = 11")
    assert out.count("PASS") == 6


def test_errors(tmp_path, capsys):
    p = tmp_path / "bad.crn"
    p.write_text("X1 -> X2, k = -1\n")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 1 and "line 1" in err
    assert run(capsys, "analyze", str(tmp_path / "missing.crn"))[0] == 1
    assert run(capsys, "solve", EX1, "--anchor", "X9=1,X2=1")[0] == 1


@pytest.mark.skipif(shutil.which("crndep") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["crndep", "check", EX1, "--theorem", "dep1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "unique per stoichiometric class" in proc.stdout
