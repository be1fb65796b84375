import csv
import io
import json
import math
import subprocess
import sys

import pytest

from dkwaves import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parse_grid():
    assert cli.parse_grid("2.5") == (2.5, 2.5, 1)
    assert cli.parse_grid("0:1:5") == (0.0, 1.0, 5)
    for bad in ("a", "1:2", "1:0:3", "0:1:0"):
        with pytest.raises(Exception):
            cli.parse_grid(bad)


def test_eval_csv_shape(capsys):
    code, out, _ = run(capsys, "eval", "--J", "2", "--M", "1", "--r", "1:2:3", "--theta", "0.5:1:2")
    table = rows(out)
    assert code == 0
    assert table[0][:4] == ["t", "r", "theta", "phi"] and len(table[0]) == 36
    assert len(table) == 1 + 6


def test_eval_values_round_trip(capsys):
    from dkwaves.fields import BosonModeSpec, SpacetimePoint, eval_U
    code, out, _ = run(capsys, "eval", "--kind", "II", "--J", "1", "--M", "-1", "--delta", "-1",
                       "--r", "1.5", "--theta", "0.8", "--phi", "0.3", "--t", "0.1")
    vals = [float(x) for x in rows(out)[1]]
    U = eval_U(BosonModeSpec(1.25, 1, -1, -1, 1, "II"), SpacetimePoint(0.1, 1.5, 0.8, 0.3)).reshape(16)
    assert vals[4:] == [x for z in U for x in (z.real, z.imag)]


def test_eval_psi_json(capsys):
    code, out, _ = run(capsys, "eval", "--field", "Psi", "--j", "1.5", "--m", "-0.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    assert len(doc["columns"]) == 12 and len(doc["rows"]) == 1


def test_random_points_follow_seed(capsys, monkeypatch):
    args = ("eval", "--points", "4", "--r", "1:5:2", "--theta", "0.4:2.7:2")
    _, a, _ = run(capsys, *args, "--seed", "3")
    monkeypatch.setenv("DKWAVES_SEED", "3")
    _, b, _ = run(capsys, *args)
    monkeypatch.setenv("DKWAVES_SEED", "4")
    _, c, _ = run(capsys, *args)
    _, d, _ = run(capsys, *args, "--seed", "3")
    assert a == b == d and a != c


def test_bad_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("DKWAVES_SEED", "nope")
    code, _, err = run(capsys, "eval")
    assert code == 2 and "DKWAVES_SEED" in err


def test_workers_keep_row_order(capsys):
    args = ("eval", "--J", "3", "--M", "2", "--r", "1:4:5", "--phi", "0:3:3")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--workers", "4")
    assert a == b


def test_config_supplies_defaults_and_flags_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scan\nJ = 2\nchi = 0.5:1.5:3\nformat=json\n")
    _, out, _ = run(capsys, "curved-scan", "--config", str(cfg))
    doc = json.loads(out)
    assert [r[0] for r in doc["rows"]] == [0.5, 1.0, 1.5]
    _, out, _ = run(capsys, "curved-scan", "--config", str(cfg), "--chi", "0.7", "--format", "csv")
    assert len(rows(out)) == 2 and float(rows(out)[1][0]) == 0.7


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("J 2\n")
    assert run(capsys, "curved-scan", "--config", str(cfg))[0] == 2
    cfg.write_text("unknown_key=1\n")
    assert run(capsys, "curved-scan", "--config", str(cfg))[0] == 2
    assert run(capsys, "curved-scan", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_curved_scan_columns_and_values(capsys):
    code, out, _ = run(capsys, "curved-scan", "--J", "3", "--chi", "0.2:1.4:4")
    table = rows(out)
    assert code == 0
    assert table[0] == ["chi", "gap", "gap_analytic", "tan_half_chi", "dynamical_residual"]
    for row in table[1:]:
        chi, gap = float(row[0]), float(row[1])
        assert abs(gap - math.tan(chi / 2)) < 1e-12


@pytest.mark.parametrize("chi", ["0:1:3", "1:3.2:3", "0"])
def test_curved_scan_rejects_poles(capsys, chi):
    code, _, err = run(capsys, "curved-scan", "--chi", chi)
    assert code == 2 and "error" in err


def test_expand_passes_and_fails_by_tolerance(capsys):
    args = ("expand", "--kind", "II", "--J", "2", "--M", "-1", "--delta", "-1", "--points", "3")
    code, out, _ = run(capsys, *args)
    table = rows(out)
    assert code == 0 and len(table) == 4 and all(r[-1] == "pass" for r in table[1:])
    code, _, _ = run(capsys, *args, "--tolerance", "-1")
    assert code == 1


def test_certify_json_report(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "certify", "--J-max", "1", "--points", "1", "--output", str(path),
                       "--check", "clifford-relations", "--check", "parity-eigenvalue")
    doc = json.loads(path.read_text())
    assert code == 0 and out == ""
    assert doc["schema_version"] == 1 and doc["passed"] is True
    assert [c["name"] for c in doc["checks"]] == ["clifford-relations", "parity-eigenvalue"]
    assert set(doc["checks"][0]) >= {"name", "tag", "max_residual", "tolerance", "verdict"}


def test_certify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "certify", "--check", "clifford-relations", "--tolerance", "-1")
    assert code == 1 and json.loads(out)["checks"][0]["verdict"] == "fail"


def test_certify_csv(capsys):
    code, out, _ = run(capsys, "certify", "--check", "curved-obstruction-gap", "--format", "csv")
    table = rows(out)
    assert code == 0 and table[0] == ["name", "tag", "max_residual", "tolerance", "verdict"]


def test_certify_unknown_check(capsys):
    assert run(capsys, "certify", "--check", "nope")[0] == 2


@pytest.mark.parametrize("argv", [[], ["bogus"], ["eval", "--kind", "IV"], ["eval", "--J", "0"],
                                  ["eval", "--delta", "2"], ["eval", "--workers", "0"],
                                  ["eval", "--epsilon", "0.5"]])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dkwaves.cli", "curved-scan", "--chi", "1.0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("chi,gap")
