"""Evolved-probe and frozen-operator modified-wavenumber tables."""
import numpy as np
import pytest

from specwave import AdrConfig, MeasurementError, SchemeSpec, TimeSpec
from specwave.adr import (
    ModifiedWavenumberTable,
    adr_kprime_at_mode,
    adr_modified_wavenumber,
    adr_nt_table,
    analytic_table,
    dealias_table,
    kappa_grid,
    read_table_csv,
    write_table_csv,
)

UPW5 = SchemeSpec("upw5")
JS = SchemeSpec("weno5js")


def test_kappa_grid_spans_zero_to_pi():
    kap = kappa_grid(64)
    assert kap.shape == (33,)
    assert kap[0] == 0.0
    assert abs(kap[-1] - np.pi) < 1e-15


def test_evolved_probe_matches_stencil_formula_for_linear_scheme():
    # one tiny step leaves only O(sigma) integrator contamination, far
    # below the 1e-6 budget
    cfg = AdrConfig(n_x=64, tau=1e-8, dt=1e-8, probe="complex")
    table = adr_modified_wavenumber(UPW5, TimeSpec("rk4", 1e-8), cfg)
    exact = analytic_table(UPW5, 64)
    assert np.max(np.abs(table.kprime - exact.kprime)) <= 1e-6


def test_frozen_operator_is_exact_for_linear_scheme():
    exact = analytic_table(UPW5, 64)
    for probe in ("complex", "real"):
        table = adr_nt_table(UPW5, 64, probe=probe)
        assert np.max(np.abs(table.kprime - exact.kprime)) <= 1e-12


def test_probe_phase_does_not_move_linear_results():
    cfg = AdrConfig(n_x=48, tau=1e-8, dt=1e-8, probe="real")
    ts = TimeSpec("rk4", 1e-8)
    a = adr_kprime_at_mode(UPW5, ts, cfg, 7, phase=0.0)
    b = adr_kprime_at_mode(UPW5, ts, cfg, 7, phase=2.0)
    # the 1e8/dx log amplification turns float roundoff into ~1e-9
    assert abs(a - b) < 1e-7


def jump_score(table: ModifiedWavenumberTable) -> float:
    """Largest curvature of Re kprime over its median, across the grid."""
    d2 = np.abs(np.diff(table.kprime.real, 2))
    return float(np.max(d2) / np.median(d2))


def test_grid_size_choice_avoids_weight_flip_spikes():
    # nonlinear weights can flip branches between adjacent probe modes;
    # 422 sits in a quiet window while 420 does not
    ts = TimeSpec("rk4", 1e-8)
    smooth = adr_modified_wavenumber(JS, ts, AdrConfig(n_x=422, tau=1e-8, dt=1e-8))
    spiky = adr_modified_wavenumber(JS, ts, AdrConfig(n_x=420, tau=1e-8, dt=1e-8))
    assert jump_score(smooth) <= 5.0
    assert jump_score(spiky) >= 50.0


def test_dealias_average_is_seeded_and_reproducible():
    ts = TimeSpec("rk4", 1e-8)
    modes = np.array([4, 5])
    cfg0 = AdrConfig(n_x=32, tau=1e-8, dt=1e-8, phase_count=3, probe="real", seed=0)
    first = adr_modified_wavenumber(JS, ts, cfg0, modes=modes)
    again = adr_modified_wavenumber(JS, ts, cfg0, modes=modes)
    assert np.array_equal(first.kprime, again.kprime)
    assert first.meta["phase_count"] == 3 and first.meta["seed"] == 0

    cfg1 = AdrConfig(n_x=32, tau=1e-8, dt=1e-8, phase_count=3, probe="real", seed=1)
    other = adr_modified_wavenumber(JS, ts, cfg1, modes=modes)
    assert np.max(np.abs(first.kprime - other.kprime)) > 1e-9


def test_dealias_table_averages_and_validates():
    kap = np.array([0.1, 0.2, 0.3])
    t1 = ModifiedWavenumberTable(kap, np.array([1, 2, 3], dtype=complex), "adr")
    t2 = ModifiedWavenumberTable(kap, np.array([3, 4, 5], dtype=complex), "adr")
    avg = dealias_table([t1, t2])
    assert np.allclose(avg.kprime, [2, 3, 4])
    with pytest.raises(ValueError):
        dealias_table([])
    t3 = ModifiedWavenumberTable(kap + 0.05, t1.kprime, "adr")
    with pytest.raises(ValueError):
        dealias_table([t1, t3])


def test_half_revolution_phase_advance_is_refused():
    # Euler at the grid's highest mode with dt = dx lands the one-step
    # factor on the negative real axis, where the log branch is ambiguous
    dx = 2.0 * np.pi / 64
    cfg = AdrConfig(n_x=64, tau=dx, dt=dx, probe="complex")
    with pytest.raises(MeasurementError):
        adr_kprime_at_mode(UPW5, TimeSpec("euler", dx), cfg, 32)


def test_annihilated_probe_reads_nan():
    # dt tuned so the Euler factor at the highest mode is exactly zero
    dt = (2.0 * np.pi / 64) * 15.0 / 16.0
    cfg = AdrConfig(n_x=64, tau=dt, dt=dt, probe="complex")
    kp = adr_kprime_at_mode(UPW5, TimeSpec("euler", dt), cfg, 32)
    assert np.isnan(kp.real) and np.isnan(kp.imag)


def test_table_csv_roundtrip(tmp_path):
    table = adr_nt_table(JS, 32)
    path = tmp_path / "table.csv"
    write_table_csv(table, path)
    back = read_table_csv(path)
    assert np.array_equal(back.kappas, table.kappas)
    assert np.array_equal(back.kprime, table.kprime)
    assert back.source == "adr-nt"
    assert back.meta["scheme"] == "weno5js"
    junk = tmp_path / "junk.csv"
    junk.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_table_csv(junk)


def test_config_validation():
    with pytest.raises(ValueError):
        AdrConfig(n_x=4)
    with pytest.raises(ValueError):
        AdrConfig(tau=0.0)
    with pytest.raises(ValueError):
        AdrConfig(tau=1e-8, dt=3e-9)  # not a whole number of steps
    with pytest.raises(ValueError):
        AdrConfig(phase_count=0)
    with pytest.raises(ValueError):
        AdrConfig(amplitude=0.0)
    with pytest.raises(ValueError):
        AdrConfig(probe="imaginary")
    assert AdrConfig(tau=5e-8, dt=1e-8).n_steps == 5


def test_single_mode_queries_validate():
    cfg = AdrConfig(n_x=32, tau=1e-8, dt=1e-8)
    with pytest.raises(ValueError):
        adr_kprime_at_mode(UPW5, TimeSpec("rk4", 1e-8), cfg, 17)
    with pytest.raises(ValueError):
        adr_kprime_at_mode(UPW5, TimeSpec("rk4", 2e-8), cfg, 3)


def test_table_validation():
    kap = np.array([0.2, 0.1])
    with pytest.raises(ValueError):
        ModifiedWavenumberTable(kap, np.zeros(2, dtype=complex), "adr")
    with pytest.raises(ValueError):
        ModifiedWavenumberTable(np.array([0.1, 0.2]), np.zeros(3, dtype=complex), "adr")


def test_thread_count_does_not_change_the_table(monkeypatch):
    ts = TimeSpec("rk4", 1e-8)
    cfg = AdrConfig(n_x=32, tau=1e-8, dt=1e-8)
    monkeypatch.setenv("SPECWAVE_THREADS", "1")
    serial = adr_modified_wavenumber(JS, ts, cfg)
    monkeypatch.setenv("SPECWAVE_THREADS", "4")
    threaded = adr_modified_wavenumber(JS, ts, cfg)
    assert np.array_equal(serial.kprime, threaded.kprime)
