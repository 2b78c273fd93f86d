import io
import json
import subprocess
import sys

import pytest

from semitor.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_datum_validate_file():
    code, out, _ = call("datum", "validate", "a1aff.json")
    assert code == 0
    assert json.loads(out)["classification"] == "affine-untwisted"


def test_datum_validate_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"labels": ["0", "1"], "dot": [[2, -2], [-1, 2]], "i0": "0"}))
    code, _, err = call("datum", "validate", str(bad))
    assert code == 1
    assert json.loads(err)["error"] == "ValidationError"


def test_datum_describe_c2():
    code, out, _ = call("datum", "describe", "--type", "C2~")
    assert code == 0 and json.loads(out)["D"] == 2


def test_weyl_length():
    code, out, _ = call("weyl", "length", "--word", "0,1,0")
    assert code == 0 and json.loads(out)["length"] == 3
    code, out, _ = call("weyl", "length", "--word", "0,1,1,0", "--format", "tsv")
    assert "length\t0" in out


def test_tor_limit_example():
    code, out, _ = call("tor", "limit", "--lambda", "1,0", "--window", "-3:3")
    res = json.loads(out)
    assert code == 0
    assert [e["n"] for e in res["entries"]] == list(range(-3, 4))
    assert res["certificate"]["complete"] is True


def test_tor_table_tsv():
    code, out, _ = call("tor", "table", "--lambda", "1,0", "--m", "1", "--window", "-2:1", "--format", "tsv")
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "n\tweight\tword"
    assert len(lines) == 1 + 1 + 2 + 2 + 2


def test_exit_codes():
    assert call("char", "bgg", "--lambda", "-1,0")[0] == 1
    assert call("weyl", "length", "--word", "0,9")[0] == 1
    assert call("weyl", "nope")[0] == 1
    assert call("roots", "stabilize", "--word", "0", "--max-m", "0")[0] == 2
    assert call("tor", "table", "--lambda", "1,0", "--window", "0:30", "--ball-budget", "10")[0] == 2
    assert call("weyl", "length", "--word", "0", "--workers", "0")[0] == 1


def test_budgets_and_seed_in_output():
    code, out, _ = call("koszul", "check", "--m", "1", "--energy", "3", "--seed", "11")
    res = json.loads(out)
    assert res["meta"]["seed"] == 11
    assert "ball_budget" in res["meta"]["budgets"]
    assert res["certificate"]["energy_cap"] == 3
    assert res["koszul"] is True


def test_workers_do_not_change_output():
    a = call("tor", "stabilization", "--lambda", "1,0", "--window", "-4:4", "--workers", "1")[1]
    b = call("tor", "stabilization", "--lambda", "1,0", "--window", "-4:4", "--workers", "3")[1]
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["weyl", "bruhat", "--u", "0", "--w", "1,0"],
        ["weyl", "normal-form", "--word", "0"],
        ["weyl", "word", "--word", "1,0,1,0,0"],
        ["roots", "semiinf-length", "--word", "0,1"],
        ["roots", "twisted-length", "--twist", "0,1", "--word", "0,1"],
        ["roots", "stabilize", "--word", "1,0,1"],
        ["roots", "semiinf-bruhat", "--u", "1", "--w", "0"],
        ["convex", "window", "--m", "2"],
        ["convex", "check", "--window", "-5:5,1"],
        ["pbw", "dim", "--degree", "2,2"],
        ["pbw", "dim", "--degree", "0,-1", "--window", "-4:4"],
        ["pbw", "straighten", "--word", "2,0,c1:1"],
        ["koszul", "tor-dual", "--m", "1", "--energy", "2"],
        ["char", "verma", "--lambda", "1,0", "--depth", "2"],
        ["char", "twisted-bgg", "--lambda", "1,0", "--m", "1", "--depth", "3"],
        ["tor", "limit", "--type", "A2~", "--lambda", "1,1,1", "--window", "-1:1", "--box", "1"],
    ],
)
def test_commands_succeed(argv):
    code, out, err = call(*argv)
    assert code == 0, err
    json.loads(out)


def test_expected_values_through_cli():
    assert json.loads(call("weyl", "bruhat", "--u", "0", "--w", "1,0")[1])["leq"] is True
    assert json.loads(call("roots", "semiinf-length", "--word", "0")[1])["semiinf_length"] == -1
    nf = json.loads(call("weyl", "normal-form", "--word", "0")[1])
    assert nf["finite_part"] == "1" and nf["translation"]["coeffs"] == {"1": 1}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "semitor", "weyl", "length", "--word", "0,1,0"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["length"] == 3
