"""End-to-end tests of the command line: artifacts, determinism, exit codes."""

import dataclasses
import json
import math
import subprocess
import sys

import numpy as np
import pytest

import hypobgk.cli as cli


def _run(*args):
    return subprocess.run(
        [sys.executable, "-m", "hypobgk.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def _csv_rows(text):
    rows = []
    header = None
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return header, rows


def test_index_subcommand_reports_model_value():
    r = _run("index", "--dim", "2", "--basis", "energy", "--trunc", "15")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["tau"] == 2
    assert obj["hypocoercive"] is True
    assert obj["dim_ker_C2"] == 4
    assert obj["config"]["subcommand"] == "index"
    assert obj["config"]["trunc"] == 15


def test_certificate_subcommand_json():
    r = _run("certificate", "--dim", "1")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert abs(obj["mu"] - 0.04181235634839236) < 1e-9
    assert obj["valid"] is True
    assert obj["lambda"] == 2.0 * obj["mu"]
    assert len(obj["verified"]) == 50


def test_certificate_subcommand_csv():
    r = _run("certificate", "--dim", "1", "--format", "csv")
    assert r.returncode == 0
    header, rows = _csv_rows(r.stdout)
    assert header == ["d", "L", "alpha_plus", "alpha_star", "mu", "lambda", "c_d", "C_d", "valid"]
    assert len(rows) == 1
    assert abs(float(rows[0][4]) - 0.04181235634839236) < 1e-9
    # config lines ride along as comments
    assert any(line.startswith("# config:") or line.startswith("#") for line in r.stdout.splitlines())


def test_output_is_deterministic():
    a = _run("certificate", "--dim", "1")
    b = _run("certificate", "--dim", "1")
    assert a.stdout == b.stdout
    c = _run("simulate", "--epsilon", "0.05", "--tmax", "2", "--dt", "0.5", "--kmax", "16", "--format", "csv")
    d = _run("simulate", "--epsilon", "0.05", "--tmax", "2", "--dt", "0.5", "--kmax", "16", "--format", "csv")
    assert c.returncode == 0
    assert c.stdout == d.stdout


def test_spectrum_subcommand():
    r = _run("spectrum", "--dim", "1", "--kappa", "1", "2", "3", "--trunc", "60", "--format", "csv")
    assert r.returncode == 0
    header, rows = _csv_rows(r.stdout)
    assert header == ["kappa", "N", "gap"]
    assert len(rows) == 3
    assert "argmin_kappa" in r.stdout
    gaps = [float(row[2]) for row in rows]
    assert min(gaps) == gaps[0]  # the slowest mode is kappa = 1


def test_minors_subcommand():
    r = _run("minors", "--dim", "2", "--kappa", "1", "--alpha", "0.1")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["convention"] == "leading"
    assert len(obj["values"]) == 11
    assert min(obj["values"]) > 0
    assert "p11" in obj["p_values"]


def test_sweep_subcommand_rate_column_decreases():
    r = _run("sweep-L", "--from", "3", "--to", "30", "--points", "6", "--format", "csv")
    assert r.returncode == 0
    header, rows = _csv_rows(r.stdout)
    assert header == ["L", "alpha_plus", "alpha_star", "mu", "two_mu"]
    assert len(rows) == 6
    two_mu = [float(row[4]) for row in rows]
    assert all(b < a for a, b in zip(two_mu, two_mu[1:]))


def test_envelope_subcommand():
    r = _run("envelope", "--epsilon", "0.02", "--tmax", "10", "--dt", "1", "--format", "csv")
    assert r.returncode == 0
    header, rows = _csv_rows(r.stdout)
    assert header == ["t", "envelope"]
    assert len(rows) == 11
    assert float(rows[0][1]) == 2.0


def test_simulate_columns():
    r = _run("simulate", "--epsilon", "0.05", "--tmax", "1", "--dt", "0.5", "--kmax", "8", "--format", "csv")
    assert r.returncode == 0
    header, rows = _csv_rows(r.stdout)
    assert header == ["t", "entropy", "h_norm", "l1", "envelope"]
    assert len(rows) == 3
    assert float(rows[0][0]) == 0.0


def test_out_file_writing(tmp_path):
    target = tmp_path / "cert.json"
    r = _run("certificate", "--dim", "1", "--out", str(target))
    assert r.returncode == 0
    obj = json.loads(target.read_text())
    assert obj["valid"] is True


def test_usage_errors_exit_one():
    assert _run("certificate", "--dim", "7").returncode == 1
    assert _run("simulate", "--dim", "2").returncode == 1
    assert _run("certificate", "--dim", "1", "--alpha", "0.9").returncode == 1
    assert _run("certificate", "--L", "-2").returncode == 1
    assert _run("frobnicate").returncode == 1
    assert _run().returncode == 1


def test_invalid_certificate_exits_two(monkeypatch, capsys):
    real = cli.certify

    def broken(*args, **kwargs):
        cert = real(1, 2.0 * math.pi, n_verify=0)
        return dataclasses.replace(cert, valid=False, failed_kappa=3.0)

    monkeypatch.setattr(cli, "certify", broken)
    rc = cli.main(["certificate", "--dim", "1"])
    assert rc == 2
    captured = capsys.readouterr()
    assert "verification failed" in captured.err
    # the artifact is still emitted so the failure can be inspected
    assert json.loads(captured.out)["failed_kappa"] == 3.0


def test_float_rendering_round_trips():
    r = _run("certificate", "--dim", "1", "--format", "csv")
    _, rows = _csv_rows(r.stdout)
    mu = float(rows[0][4])
    obj = json.loads(_run("certificate", "--dim", "1").stdout)
    assert np.isclose(mu, obj["mu"], rtol=1e-14, atol=0.0)
