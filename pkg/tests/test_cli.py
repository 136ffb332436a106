import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from atomcavity.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "atomcavity", *args], capture_output=True, text=True, cwd=cwd
    )


def rows(path):
    text = Path(path).read_text()
    return list(csv.DictReader(io.StringIO(text.split("\n", 1)[1])))


def row_at(path, delta):
    return next(r for r in rows(path) if float(r["delta_over_gamma"]) == delta)


# --- scan ---------------------------------------------------------------------------


def test_scan_fig3(tmp_path):
    out = tmp_path / "fig3.csv"
    proc = run("scan", "--preset", "fig3", "-o", str(out))
    assert proc.returncode == 0, proc.stderr
    assert float(row_at(out, 0.0)["transmission"]) == pytest.approx(8.2645e-3, abs=1e-6)


def test_scan_fig6(tmp_path):
    out = tmp_path / "fig6.csv"
    assert run("scan", "--preset", "fig6", "-o", str(out)).returncode == 0
    assert float(row_at(out, 0.0)["sidebeam_T"]) == pytest.approx(0.95, abs=1e-6)


def test_scan_missing_output():
    proc = run("scan", "--preset", "fig3")
    assert proc.returncode == 2
    assert "output" in proc.stderr


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--preset", "fig3", "--lambda", "7.8e-7", "-o", "x.csv"],
        ["scan", "--eta", "3", "-o", "x.csv"],
        ["scan", "--lambda", "7.8e-7", "--waist", "2e-5", "-o", "x.csv"],
        ["scan", "--preset", "fig9", "-o", "x.csv"],
        ["scan", "--eta", "3", "--kappa-over-gamma", "1", "--depth0", "0.9", "-o", "x.csv"],
        ["scan", "--eta", "3", "--kappa-over-gamma", "1", "--gamma", "1e7", "-o", "x.csv"],
        ["scan", "--eta", "notanumber", "--kappa-over-gamma", "1", "-o", "x.csv"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_io_error(tmp_path):
    proc = run("scan", "--preset", "fig3", "-o", str(tmp_path / "missing" / "x.csv"))
    assert proc.returncode == 3


def test_scan_geometric(tmp_path):
    out = tmp_path / "geo.json"
    args = ["scan", "--lambda", "7.8e-7", "--waist", "2e-5", "--length", "1e-3", "--qsq", "1e-4",
            "--format", "json", "-o", str(out)]
    assert main(args) == 0
    data = json.loads(out.read_text())
    assert data["scenario"]["q_sq"] == 1e-4
    finesse = math.pi / 1e-4
    kw = 2 * math.pi * 2e-5 / 7.8e-7
    assert data["scenario"]["eta_c"] == pytest.approx(24 * finesse / (math.pi * kw**2), rel=1e-12)


def test_scan_matches_golden(tmp_path):
    for name, args in (
        ("fig3_coarse.csv", ["--preset", "fig3", "--dmin", "-3", "--dmax", "3", "--dstep", "0.5"]),
        ("fig6_coarse.csv", ["--preset", "fig6", "--dmin", "-1", "--dmax", "1", "--dstep", "0.25"]),
    ):
        out = tmp_path / name
        assert main(["scan", *args, "-o", str(out)]) == 0
        assert out.read_bytes() == (GOLDEN / name).read_bytes()


def test_golden_rows_by_hand():
    # Delta = -1.5 Gamma with eta = 10, kappa = Gamma: L_a = 0.1, L_d = 0.3, so the bracket is exactly 2
    r = row_at(GOLDEN / "fig3_coarse.csv", -1.5)
    assert float(r["transmission"]) == pytest.approx(0.25, abs=1e-12)
    assert float(r["fs_emission"]) == pytest.approx(0.5, abs=1e-12)
    assert float(row_at(GOLDEN / "fig6_coarse.csv", 0.0)["sidebeam_T"]) == 0.95


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"preset": "fig3", "dmin": -1, "dmax": 1, "dstep": 0.5, "eta": 20}))
    out = tmp_path / "a.csv"
    assert main(["scan", "--config", str(cfg), "--eta", "10", "-o", str(out)]) == 0
    assert len(rows(out)) == 5
    assert float(row_at(out, 0.0)["transmission"]) == pytest.approx(1 / 121)
    out2 = tmp_path / "b.csv"
    assert main(["scan", "--config", str(cfg), "-o", str(out2)]) == 0
    assert float(row_at(out2, 0.0)["transmission"]) == pytest.approx(1 / 441)


def test_config_output_key(tmp_path):
    cfg = tmp_path / "run.json"
    out = tmp_path / "o.csv"
    cfg.write_text(json.dumps({"--preset": "fig3", "output": str(out), "kappa-over-gamma": 1.0}))
    assert main(["scan", "--config", str(cfg)]) == 0
    assert out.exists()


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"bogus": 1}', '{"eta": [1, 2]}'])
def test_bad_config(tmp_path, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    assert main(["scan", "--config", str(cfg), "-o", str(tmp_path / "x.csv")]) == 2


def test_missing_config(tmp_path):
    assert main(["scan", "--config", str(tmp_path / "nope.json"), "-o", "x.csv"]) == 2


# --- ensemble ----------------------------------------------------------------------


def test_ensemble_F2(tmp_path):
    out = tmp_path / "f2.json"
    args = ["ensemble", "--kind", "uniform", "--n", "50", "--estimator", "F2", "--samples", "10000", "--seed", "7"]
    proc = run(*args, "-o", str(out))
    assert proc.returncode == 0, proc.stderr
    data = json.loads(out.read_text())
    assert abs(data["mean"] - 0.02) <= 5 * data["std_error"]
    # byte-identical on repeat, and to stdout
    again = run(*args)
    assert again.stdout == out.read_text()


def test_ensemble_H_stdout(capsys):
    args = ["ensemble", "--kind", "uniform", "--n", "50", "--estimator", "H", "--samples", "10000", "--seed", "7"]
    assert main(args) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["mean"] - 0.5) <= 5 * data["std_error"]


def test_ensemble_complex_mean(capsys):
    assert main(["ensemble", "--kind", "uniform", "--n", "5", "--estimator", "G", "--samples", "100",
                 "--seed", "1"]) == 0
    assert set(json.loads(capsys.readouterr().out)["mean"]) == {"re", "im"}


def test_ensemble_workers_do_not_change_output(capsys):
    base = ["ensemble", "--kind", "uniform", "--n", "20", "--estimator", "G2", "--samples", "3000", "--seed", "3"]
    main(base)
    one = capsys.readouterr().out
    main(base + ["--workers", "4"])
    assert capsys.readouterr().out == one


@pytest.mark.parametrize(
    "argv",
    [
        ["--estimator", "XX", "--samples", "10", "--seed", "1"],
        ["--estimator", "F2", "--samples", "10"],
        ["--estimator", "F2", "--samples", "10", "--seed", "1", "--kind", "crystal"],
    ],
)
def test_ensemble_usage_errors(argv):
    base = ["ensemble", "--kind", "uniform", "--n", "5"]
    assert main(base + argv) == 2


def test_ensemble_unknown_estimator_subprocess():
    proc = run("ensemble", "--kind", "uniform", "--n", "5", "--estimator", "nope", "--samples", "10", "--seed", "1")
    assert proc.returncode == 2


# --- layout ------------------------------------------------------------------------


def test_layout_command(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["layout", "--kind", "bragg", "--n", "4", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,x,y,z"
    assert lines[2] == "1,0.5,0,-0.5"


def test_layout_uniform_needs_seed(tmp_path):
    assert main(["layout", "--kind", "uniform", "--n", "4", "-o", str(tmp_path / "l.csv")]) == 2


# --- check -------------------------------------------------------------------------


def test_check_passes(tmp_path):
    out = tmp_path / "report.txt"
    proc = run("check", "-o", str(out))
    assert proc.returncode == 0
    report = out.read_text()
    for name in ("optical theorem", "g_cl == g", "ratio law"):
        assert name in report
    g_line = next(line for line in report.splitlines() if "g_cl == g" in line)
    residual = float(g_line.split("residual=")[1].split()[0])
    assert residual <= 1e-10


def test_check_detects_fault():
    proc = run("check", "--perturb", "beta", "1e-3")
    assert proc.returncode == 1
    assert "FAIL" in proc.stdout


def test_check_bad_perturbation():
    assert main(["check", "--perturb", "kappa", "1e-3"]) == 2
    assert main(["check", "--perturb", "beta", "abc"]) == 2
