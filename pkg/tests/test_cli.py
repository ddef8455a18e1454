import csv
import io
import json
import subprocess
import sys

import pytest

from supalg import classring
from supalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_hopf_text(capsys):
    code, out, _ = run(capsys, "verify-hopf", "--p", "3", "--r", "1", "--s", "1")
    assert code == 0
    assert out.startswith("verify-hopf ") and out.rstrip().endswith("result: PASS")


def test_enumerate_points_json(capsys):
    code, out, _ = run(capsys, "enumerate-points", "--m", "1", "--n", "1", "--r", "1", "--p", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["rows"]) == 9
    assert set(data["rows"][0]) == {"index", "alphas", "beta"}


def test_enumerate_points_with_module_check(capsys):
    code, out, err = run(
        capsys, "enumerate-points", "--m", "1", "--n", "1", "--r", "1", "--p", "3", "--f", "T^3", "--check-modules",
        "--format", "csv",
    )
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["index", "alphas", "beta", "module"]
    assert len(rows) == 6 and all(row[-1] == "pass" for row in rows[1:])
    assert "5 points" in err


def test_output_is_deterministic(capsys):
    argv = ["charclass-check", "--m", "1", "--n", "1", "--r", "2", "--p", "3", "--f", "T^3", "--eta", "1", "--format", "json"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["cohomology", "--p", "3", "--r", "1", "--s", "1", "--max-degree", "3"],
        ["cocycle-check", "--p", "3", "--r", "1", "--s", "2"],
        ["boundary-check", "--p", "3", "--f", "T^9+T^3", "--eta", "2"],
        ["endos", "--p", "3", "--r", "1", "--s", "2"],
        ["covering-check", "--m", "2", "--n", "0", "--r", "1", "--p", "3"],
        ["dual-roundtrip", "--p", "3", "--r", "1", "--f", "T^9+2T^3", "--eta", "1"],
        ["ext-table", "--p", "3", "--r", "1"],
        ["charclass-check", "--m", "1", "--n", "1", "--r", "1", "--p", "3", "--f", "T^9+2T^3", "--relation", "theta"],
        ["charclass-check", "--m", "1", "--n", "1", "--r", "2", "--p", "3", "--s", "1", "--sample", "3", "--seed", "7"],
    ],
)
def test_commands_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert "result: PASS" in out


def test_cohomology_text_lines(capsys):
    _, out, _ = run(capsys, "cohomology", "--p", "3", "--r", "1", "--s", "2", "--max-degree", "3")
    lines = [line for line in out.splitlines() if line[:1].isdigit()]
    assert [int(line.split(":")[1].split()[0]) for line in lines] == [1, 2, 3, 4]
    assert "internal=5:1,6:1,18:1" in lines[2]


def test_cohomology_json_fields(capsys):
    _, out, _ = run(capsys, "cohomology", "--p", "3", "--r", "1", "--s", "2", "--max-degree", "2", "--format", "json")
    rows = json.loads(out)["rows"]
    assert rows[2]["by_internal_degree"] == [[5, 1], [6, 1], [18, 1]]
    assert rows[2]["presentation"] == [3, 2, 1] and rows[2]["match"] is True


def test_sample_is_reproducible_for_a_seed(capsys):
    base = ["charclass-check", "--m", "1", "--n", "1", "--r", "2", "--p", "3", "--s", "1", "--sample", "2", "--format", "json"]
    a = json.loads(run(capsys, *base, "--seed", "1")[1])["rows"]
    b = json.loads(run(capsys, *base, "--seed", "1")[1])["rows"]
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-hopf", "--p", "4", "--r", "1", "--s", "1"],
        ["verify-hopf", "--p", "2", "--r", "1", "--s", "1"],
        ["verify-hopf", "--p", "3", "--r", "1"],
        ["verify-hopf", "--p", "3", "--r", "1", "--s", "1", "--f", "T^3"],
        ["verify-hopf", "--p", "3", "--r", "1", "--f", "T^4"],
        ["charclass-check", "--m", "1", "--n", "1", "--r", "1", "--p", "3"],
        ["no-such-command"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_budget_refusal_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("SUPALG_BUDGET", "10")
    code, _, err = run(capsys, "enumerate-points", "--m", "1", "--n", "1", "--r", "1", "--p", "3")
    assert code == 2 and "budget exceeded" in err
    code, _, _ = run(capsys, "enumerate-points", "--m", "1", "--n", "1", "--r", "1", "--p", "3", "--force")
    assert code == 0


def test_failed_check_exits_1(capsys, monkeypatch):
    broken = classring.RelationReport([("forced failure", False)])
    monkeypatch.setattr(classring, "verify_relations_at_point", lambda *a, **k: broken)
    code, out, _ = run(
        capsys, "charclass-check", "--m", "1", "--n", "1", "--r", "1", "--p", "3", "--f", "T^3", "--relation", "er-p"
    )
    assert code == 1 and "result: FAIL" in out


def test_polynomial_normalisation_notice(capsys):
    code, _, err = run(capsys, "boundary-check", "--p", "3", "--f", "2T^9+T^3")
    assert code == 0 and "normal" in err.lower()


def test_console_script_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "supalg.cli", "ext-table", "--p", "3", "--r", "1", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0
    assert result.stdout.splitlines()[0] == "section,item,degree,value"
