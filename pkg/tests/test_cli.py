import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from esp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_exit(capsys, *argv):
    # argparse errors exit through SystemExit
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc) == 8
    code, out, _ = run(capsys, "list", "--family", "ext-morse")
    assert code == 0 and "m < A - 1/2" in out
    code, out, _ = run(capsys, "list")
    assert all(fid in out for fid in ("ext-oscillator", "std-rosen-morse", "ext-scarf1"))


@pytest.mark.parametrize("argv, expected", [
    (["--family", "ext-oscillator", "--omega", "2", "--ell", "0", "--dim", "3", "--levels", "3"],
     [3.0, 7.0, 11.0]),
    (["--family", "ext-scarf1", "--A", "2", "--B", "0.5", "--levels", "2"], [4.0, 9.0]),
])
def test_spectrum_values(capsys, argv, expected):
    code, out, _ = run(capsys, "spectrum", *argv, "--format", "json")
    assert code == 0
    assert [lv["E_analytic"] for lv in json.loads(out)["levels"]] == expected


def test_spectrum_numeric_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "ext-morse", "--A", "4.5", "--p2", "1",
                       "--levels", "2", "--numeric", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[1]["E_analytic"]) == -9.0
    assert float(rows[1]["abs_err"]) < 1e-6


def test_spectrum_morse_out_of_range(capsys):
    code, _, err = run(capsys, "spectrum", "--family", "ext-morse", "--A", "4.5", "--p2", "1",
                       "--levels", "9")
    assert code == 2 and "m_max=3" in err


@pytest.mark.parametrize("argv", [
    ["--family", "ext-scarf1", "--A", "2", "--B", "0.5", "--levels", "4"],
    ["--family", "ext-oscillator", "--omega", "2", "--ell", "1", "--dim", "5", "--levels", "4"],
])
def test_verify_passes(capsys, argv):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_failure_exit_one(capsys):
    code, out, err = run(capsys, "verify", "--family", "ext-morse", "--A", "4.5", "--p2", "1",
                         "--reading", "as_printed", "--levels", "2")
    assert code == 1 and json.loads(out)["pass"] is False and "m=0" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--family", "ext-scarf1", "--A", "two", "--B", "0.5"],
    ["verify", "--family", "ext-scarf1", "--A", "2"],
    ["verify", "--family", "ext-scarf1", "--A", "2", "--B", "0.5", "--omega", "1"],
    ["verify", "--family", "nonsense"],
    ["spectrum", "--family", "ext-oscillator", "--omega", "2", "--ell", "0.5", "--dim", "3"],
    ["spectrum", "--family", "ext-scarf1", "--A", "1", "--B", "0.6"],
    ["eval-poly", "--poly", "x1-laguerre", "--n", "0", "--alpha", "1", "--z", "2"],
    ["eval-poly", "--poly", "x1-jacobi", "--n", "1", "--alpha", "2", "--z", "1"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run_exit(capsys, *argv)
    assert code == 2 and err


def test_wavefunction_csv(capsys, tmp_path):
    path = tmp_path / "psi.csv"
    code, _, _ = run(capsys, "wavefunction", "--family", "ext-oscillator", "--omega", "2",
                     "--ell", "0", "--dim", "3", "--m", "0", "--grid", "0.01:8:800",
                     "--out", str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "r,psi,V,V1,V2" and len(lines) == 801
    data = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",")
    r, psi = data[:, 0], data[:, 1]
    f = psi**2 * r**2
    assert float(np.sum(0.5 * (f[1:] + f[:-1]) * np.diff(r))) == pytest.approx(1.0, abs=1e-3)


def test_wavefunction_negative_grid(capsys):
    code, out, _ = run(capsys, "wavefunction", "--family", "ext-scarf1", "--A", "2", "--B", "0.5",
                       "--grid", "-1.5:1.5:5")
    assert code == 0 and len(out.splitlines()) == 6


def test_wavefunction_grid_outside_domain(capsys):
    code, _, err = run(capsys, "wavefunction", "--family", "ext-scarf1", "--A", "2", "--B", "0.5",
                       "--grid", "0:1.7:10")
    assert code == 2 and "domain" in err


@pytest.mark.parametrize("argv, value", [
    (["--poly", "x1-laguerre", "--n", "1", "--alpha", "1", "--z", "2"], -4.0),
    (["--poly", "laguerre", "--n", "0", "--z", "3.7"], 1.0),
    (["--poly", "x1-jacobi", "--n", "1", "--alpha", "2", "--beta", "1", "--z", "1"], -3.0),
])
def test_eval_poly(capsys, argv, value):
    code, out, _ = run(capsys, "eval-poly", *argv, "--format", "csv")
    assert code == 0
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(value)


def test_numbers_have_twelve_significant_digits(capsys):
    code, out, _ = run(capsys, "eval-poly", "--poly", "laguerre", "--n", "3", "--alpha", "0.1",
                       "--z", "0.3", "--format", "csv")
    value = out.splitlines()[1].split(",")[1]
    assert len(value.replace("-", "").replace(".", "").lstrip("0")) <= 12


def test_help_lists_symbols(capsys):
    code, out, _ = run_exit(capsys, "spectrum", "--help")
    assert code == 0 and "--P1" in out and "--p2" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "esp.cli", "list", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and len(json.loads(proc.stdout)) == 8
