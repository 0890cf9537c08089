"""End-to-end command-line behavior: exit codes, files, stdout JSON."""
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from specwave import WaveHistory
from specwave.adr import read_table_csv
from specwave.cli import main
from specwave.schemes import SchemeSpec, modified_wavenumber_linear
from specwave.waves import read_history, write_history


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, json.loads(out) if out.strip() else None


def test_spectrum_analytic_reports_the_nyquist_value(tmp_path, capsys):
    out = tmp_path / "t.csv"
    rc, payload = run_cli(
        capsys,
        "spectrum",
        "--method",
        "analytic",
        "--scheme",
        "upw5",
        "--nx",
        "32",
        "--out",
        str(out),
    )
    assert rc == 0
    table = read_table_csv(out)
    assert abs(table.kappas[-1] - np.pi) < 1e-12
    assert abs(table.kprime[-1] - (-16j / 15)) < 1e-12
    assert payload["out"] == str(out)
    assert (tmp_path / "t.csv.manifest.json").exists()


def test_spectrum_analytic_rejects_nonlinear_schemes(tmp_path, capsys):
    rc, _ = run_cli(
        capsys,
        "spectrum",
        "--method",
        "analytic",
        "--scheme",
        "weno5js",
        "--nx",
        "32",
        "--out",
        str(tmp_path / "t.csv"),
    )
    assert rc == 1


def test_spectrum_seed_moves_dealiased_tables(tmp_path, capsys):
    def run(seed, name):
        rc, _ = run_cli(
            capsys,
            "spectrum",
            "--method",
            "adr",
            "--scheme",
            "weno5js",
            "--nx",
            "32",
            "--phases",
            "3",
            "--probe",
            "real",
            "--seed",
            str(seed),
            "--out",
            str(tmp_path / name),
        )
        assert rc == 0
        return (tmp_path / name).read_bytes()

    first = run(0, "a.csv")
    again = run(0, "b.csv")
    moved = run(1, "c.csv")
    assert first == again
    assert first != moved


def test_gvpmap_reports_areas_and_writes_deterministically(tmp_path, capsys):
    argv = ["gvpmap", "--sigma", "0.1", "--resolution", "24", "--table-nx", "64"]
    rc1, payload = run_cli(capsys, *argv, "--out-csv", str(tmp_path / "a.csv"),
                           "--out-svg", str(tmp_path / "a.svg"))
    rc2, _ = run_cli(capsys, *argv, "--out-csv", str(tmp_path / "b.csv"))
    assert rc1 == 0 and rc2 == 0
    assert 0.0 <= payload["area_near_origin"] <= 1.0
    assert 0.0 <= payload["area_full"] <= 1.0
    assert payload["shape"] == [24, 24]
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    ET.fromstring((tmp_path / "a.svg").read_text())


def test_measure_dft_matches_the_stencil_slope(capsys):
    spacing = 2 * np.pi / 64
    rc, payload = run_cli(
        capsys,
        "measure",
        "--method",
        "dft",
        "--scheme",
        "upw5",
        "--nx",
        "64",
        "--kappa",
        str(8 * spacing),
    )
    assert rc == 0
    kp = modified_wavenumber_linear(
        SchemeSpec("upw5").linear_stencil, np.array([7 * spacing, 9 * spacing])
    )
    expect = (kp[1].real - kp[0].real) / (2 * spacing)
    assert abs(payload["measured"] - expect) < 1e-6
    assert payload["in_band"] is True


def test_measure_peak_on_a_stored_run(tmp_path, capsys):
    x = np.linspace(-1.0, 1.0, 64, endpoint=False)
    times = np.linspace(0.0, 0.5, 11)
    u = np.array([np.cos(2 * np.pi * (x - t)) for t in times])
    hist = WaveHistory(
        x=x, times=times, u=u, meta={"v_phase_exact": 1.0, "v_group_exact": 1.0}
    )
    write_history(hist, tmp_path / "run")
    rc, payload = run_cli(capsys, "measure", "--method", "peak", "--run", str(tmp_path / "run"))
    assert rc == 0
    assert abs(payload["ratio"] - 1.0) <= 1e-3
    assert payload["in_band"] is True


def test_simulate_then_measure_envelope(tmp_path, capsys):
    run_dir = tmp_path / "run"
    rc, payload = run_cli(
        capsys,
        "simulate",
        "--problem",
        "advection",
        "--nx",
        "48",
        "--dt",
        "1e-3",
        "--T",
        "0.05",
        "--snapshots",
        "10",
        "--out",
        str(run_dir),
    )
    assert rc == 0
    assert payload["exact_solution"] is True
    assert abs(payload["sigma"] - 1e-3 / (2.0 / 48)) < 1e-12
    hist = read_history(run_dir)
    assert hist.meta["parameters"]["nx"] == 48
    rc2, meas = run_cli(capsys, "measure", "--method", "envelope", "--run", str(run_dir))
    assert rc2 == 0
    assert meas["exact"] == 1.0
    assert meas["ratio"] is not None


def test_simulate_coupled_custom_driver_is_marked_inexact(tmp_path, capsys):
    run_dir = tmp_path / "run"
    rc, payload = run_cli(
        capsys,
        "simulate",
        "--problem",
        "coupled",
        "--a",
        "2.0",
        "--nx",
        "60",
        "--dt",
        "1e-3",
        "--T",
        "0.02",
        "--domain",
        "-9.42477796076938,9.42477796076938",
        "--out",
        str(run_dir),
    )
    assert rc == 0
    assert payload["exact_solution"] is False
    rc2, meas = run_cli(capsys, "measure", "--method", "envelope", "--run", str(run_dir))
    assert rc2 == 0
    assert meas["exact"] is None and meas["ratio"] is None
    assert "in_band" not in meas


def test_config_file_merges_and_flags_override(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(
        "# small advection run\n"
        "nx = 32\n"
        "dt = 1e-3\n"
        "T = 0.01\n"
        "out = {}\n".format(tmp_path / "run_a")
    )
    rc, _ = run_cli(capsys, "simulate", "--config", str(cfg))
    assert rc == 0
    params = read_history(tmp_path / "run_a").meta["parameters"]
    assert params["nx"] == 32

    rc2, _ = run_cli(
        capsys, "simulate", "--config", str(cfg), "--nx", "64", "--out", str(tmp_path / "run_b")
    )
    assert rc2 == 0
    params2 = read_history(tmp_path / "run_b").meta["parameters"]
    assert params2["nx"] == 64
    assert params2["dt"] == 1e-3


def test_unknown_config_key_is_a_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nx = 32\nfrobnicate = 1\n")
    rc, _ = run_cli(capsys, "simulate", "--config", str(cfg))
    assert rc == 1


def test_config_value_outside_choices_is_a_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("time = rk7\n")
    rc, _ = run_cli(capsys, "spectrum", "--config", str(cfg), "--nx", "32",
                    "--out", str(tmp_path / "t.csv"))
    assert rc == 1


def test_missing_required_flag_is_a_usage_error(capsys):
    rc, _ = run_cli(capsys, "simulate", "--dt", "1e-3", "--T", "0.01")
    assert rc == 1


def test_cfl_violation_exits_two(tmp_path, capsys):
    rc, _ = run_cli(
        capsys,
        "simulate",
        "--nx",
        "48",
        "--dt",
        "0.1",
        "--T",
        "0.2",
        "--out",
        str(tmp_path / "run"),
    )
    assert rc == 2


def test_reproduce_target_passes_and_writes_reports(tmp_path, capsys):
    out = tmp_path / "rep"
    rc, payload = run_cli(capsys, "reproduce", "--target", "sec51-ratios", "--out", str(out))
    assert rc == 0
    assert payload["passed"] is True
    assert (out / "report.json").exists()
    assert (out / "report.txt").exists()
    assert (out / "manifest.json").exists()
    text = (out / "report.txt").read_text()
    assert "sec51-ratios" in text


def test_reproduce_unknown_target_is_a_usage_error(tmp_path, capsys):
    rc, _ = run_cli(capsys, "reproduce", "--target", "fig99", "--out", str(tmp_path / "rep"))
    assert rc == 1
