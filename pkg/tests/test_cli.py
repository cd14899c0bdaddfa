import json
import subprocess
import sys

import pytest

from drwitt.cli import COMMANDS, main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:  # argparse reports bad arguments this way
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_drmonoid_example(capsys):
    code, out, _ = run(capsys, "drmonoid", "-d", "1", "-f", "(2)")
    data = json.loads(out)
    assert code == 0 and len(data["elements"]) == 3
    assert data["schema"] == "drwitt.drmonoid/1"


def test_theta_example(capsys):
    code, out, _ = run(capsys, "theta", "-g", "1", "--tau", "i", "--k", "0", "--u", "0", "--prec", "128")
    assert code == 0
    assert json.loads(out)["value"]["re"].startswith("1.0864348112")


def test_classgroup_example(capsys):
    code, out, _ = run(capsys, "classgroup", "-d", "5")
    assert code == 0 and json.loads(out)["divisors"] == [2]


def test_csv_and_out_file(capsys, tmp_path):
    target = tmp_path / "v.csv"
    code, out, _ = run(capsys, "mvector-build", "-d", "1", "--a", "0,1/2", "--format", "csv",
                       "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[0] == "class,orbit,degree,minpoly"


def test_verify_passes_for_gauss_level_2(capsys):
    code, out, _ = run(capsys, "mvector-verify", "-d", "1", "--a", "0,1/2", "--prime", "(3)")
    assert code == 0 and json.loads(out)["pass"]


@pytest.mark.parametrize("cmd", sorted(COMMANDS))
def test_schema_for_every_command(capsys, cmd):
    extra = {"theta": ["--tau", "i"], "classical": ["--kind", "j", "--tau", "i"]}.get(cmd, [])
    code, out, _ = run(capsys, cmd, "--schema", *extra)
    schema = json.loads(out)
    assert code == 0 and schema["type"] == "object" and "properties" in schema


def test_usage_errors(capsys, monkeypatch):
    assert run(capsys, "classgroup", "-d", "4")[0] == 1
    assert run(capsys, "drmonoid", "-f", "(2")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "classgroup", "--prec", "8")[0] == 1
    monkeypatch.setenv("DRWITT_PREC", "lots")
    assert run(capsys, "classgroup", "-d", "5")[0] == 1
    monkeypatch.setenv("DRWITT_PREC", "64")
    code, out, _ = run(capsys, "theta", "--tau", "i", "--k", "0", "--u", "0")
    assert code == 0 and json.loads(out)["prec"] == 64


def test_precision_and_pole_exit_code(capsys):
    assert run(capsys, "classical", "--kind", "weber", "--tau", "i", "--a", "1,0")[0] == 4
    assert run(capsys, "theta", "--tau", "0.001i", "--k", "0", "--u", "0")[0] == 4


def test_budget_exit_code(capsys):
    assert run(capsys, "drmonoid", "-f", "(1009)", "--factor-bound", "10")[0] == 3
    assert run(capsys, "drmonoid", "-f", "(6)", "--factor-bound", "10")[0] == 0


def test_verification_failure_exit_code(capsys):
    # recognition of the Q(sqrt(-5)) Weber values needs far more than 256 bits
    code, out, _ = run(capsys, "mvector-verify", "-d", "5", "--a", "0,1/2")
    assert code == 2 and not json.loads(out)["pass"]


def test_byte_identical_runs():
    argv = [sys.executable, "-m", "drwitt.cli", "simn-compare", "-d", "1", "-N", "2"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["equal"]
