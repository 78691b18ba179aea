from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qmock.cli import EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_series_eta_text(capsys):
    code, out, _ = run(capsys, "series", "eta", "--order", "10")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "1/24 -> 1" and lines[1] == "25/24 -> -1"
    assert lines[-1] == "O(q^10)"


def test_series_g_and_e2(capsys):
    _, out, _ = run(capsys, "series", "g", "--order", "5")
    assert [ln.split(" -> ")[1] for ln in out.splitlines()[:5]] == ["-1/24", "1/2", "2", "3", "5"]
    _, out, _ = run(capsys, "--format", "csv", "series", "E2", "--order", "4")
    assert out.splitlines()[1:] == ["0,1", "1,-24", "2,-72", "3,-96"]


def test_series_json_and_indices(capsys):
    code, out, _ = run(capsys, "series", "curlyJ-2", "--order", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["terms"][0]["exponent"] == "0"
    code, out2, _ = run(capsys, "series", "curlyJ", "--k", "-2", "--order", "5", "--format", "json")
    assert out2 == out
    for name in ("theta3", "appell2", "h1", "half_theta", "J0", "E4"):
        assert run(capsys, "series", name, "--order", "3")[0] == 0


def test_series_errors(capsys):
    assert run(capsys, "series", "zeta", "--order", "3")[0] == EXIT_USAGE
    assert run(capsys, "series", "J", "--order", "3")[0] == EXIT_USAGE
    assert run(capsys, "series", "eta", "--order", "-1")[0] == EXIT_USAGE
    assert run(capsys, "series", "eta", "--prec", "5")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_identity_commands(capsys):
    code, out, _ = run(capsys, "identity", "H_COMBINATION", "--order", "20")
    assert code == EXIT_OK and out.startswith("PASS H_COMBINATION")
    code, out, _ = run(capsys, "identity", "DUALITY", "--k", "2", "--order", "30", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["pass"] is True
    assert run(capsys, "identity", "NOPE")[0] == EXIT_USAGE
    assert run(capsys, "identity", "DUALITY")[0] == EXIT_USAGE


def test_identity_failure_exit_code(capsys):
    code, out, _ = run(capsys, "identity", "G_EQUALS_CURLYJ", "--order", "10", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_FAIL and data["first_mismatch"]["exponent"] == "2"


def test_identity_all(capsys):
    code, out, _ = run(capsys, "identity", "all", "--order", "30", "--format", "json")
    data = json.loads(out)
    failing = [r["id"] for r in data if not r["pass"]]
    assert failing == ["G_EQUALS_CURLYJ"] and code == EXIT_FAIL
    assert {"DUALITY_2", "DUALITY_4", "DUALITY_6"} <= {r["id"] for r in data}


def test_joyce_table(capsys):
    code, out, _ = run(capsys, "joyce", "--n-max", "3", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert rows[0]["closed_form"] == "q/(1 - q)" and rows[0]["residue"] == "-1"
    assert rows[2]["composition_sum_agrees"] is True and rows[2]["residue"] == "-1/9"
    assert rows[2]["closed_form_poly"]["den"]
    assert run(capsys, "joyce", "--n-max", "0")[0] == EXIT_USAGE


def test_joyce_zeta_partial(capsys):
    code, out, _ = run(capsys, "joyce", "--zeta-partial", "--k", "2", "--n-max", "1000", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["value"].startswith("-1.0823")
    assert abs(float(data["difference"])) < 1e-5


def test_numeric_commands(capsys):
    code, out, _ = run(capsys, "numeric", "G_MODULAR_S", "--tau", "0.5+1.0i", "--prec", "50", "--format", "json")
    (res,) = json.loads(out)
    assert code == 0 and float(res["residual"]) < 1e-15
    code, out, _ = run(capsys, "numeric", "MU_VANISH_1", "--random", "5", "--prec", "40", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 5
    code, out, _ = run(capsys, "numeric", "SHADOW", "--tau", "1.0i", "--prec", "50", "--format", "json")
    assert code == 0 and float(json.loads(out)[0]["relative"]) < 1e-6


def test_numeric_errors(capsys):
    assert run(capsys, "numeric", "NOPE")[0] == EXIT_USAGE
    assert run(capsys, "numeric", "MU_SYM", "--tau", "0.1+1i")[0] == EXIT_USAGE
    assert run(capsys, "numeric", "MU_VANISH_1", "--tau", "0.1-1i")[0] == EXIT_USAGE


def test_resource_limit_exit_code(capsys):
    assert run(capsys, "joyce", "--n-max", "3", "--max-compositions", "20")[0] == EXIT_OK
    assert run(capsys, "joyce", "--n-max", "3", "--max-compositions", "30")[0] == EXIT_RESOURCE


def test_deterministic_json(capsys):
    argv = ["numeric", "MU3_PLUS", "--random", "2", "--seed", "7", "--prec", "30", "--format", "json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    a = run(capsys, "identity", "ETA_TRIPLE", "--order", "12", "--format", "json")[1]
    assert a == run(capsys, "identity", "ETA_TRIPLE", "--order", "12", "--format", "json")[1]


def test_global_flags_before_or_after_subcommand(capsys):
    a = run(capsys, "--order", "6", "series", "E2")[1]
    b = run(capsys, "series", "E2", "--order", "6")[1]
    assert a == b


def test_run_config_validation():
    from fractions import Fraction
    with pytest.raises(ValueError):
        RunConfig("series", Fraction(0), 50, "text", 0, 16)
    with pytest.raises(ValueError):
        RunConfig("series", Fraction(1), 9, "text", 0, 16)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmock.cli", "series", "E2", "--order", "3"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[:3] == ["0 -> 1", "1 -> -24", "2 -> -72"]
