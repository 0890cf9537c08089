"""Group-velocity preservation maps and their closed-form factors."""
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from specwave import GvpMap, SchemeSpec
from specwave.adr import ModifiedWavenumberTable
from specwave.qldrp import (
    BAND_COLORS,
    GVP_BAND,
    NEAR_ORIGIN_WINDOW,
    GroupVelocityPoint,
    default_axis,
    dkappa_dk_numeric,
    group_velocity,
    group_velocity_euler,
    group_velocity_rk3,
    group_velocity_rk4,
    gvp_area,
    gvp_map,
    map_summary,
    table_for_map,
    write_map_csv,
    write_map_svg,
)
from specwave.timeint import amplification_polynomial

UPW5 = SchemeSpec("upw5")

POINTS = [
    GroupVelocityPoint(0.5, 0.3, 0.49 - 0.01j, 0.98 - 0.05j, 0.8),
    GroupVelocityPoint(1.5, 1.0, 1.40 - 0.20j, 0.60 - 0.40j, 1.2),
    GroupVelocityPoint(2.8, 2.5, 1.90 - 1.10j, -0.90 - 1.20j, 0.6),
]


def poly_derivative(kind: str, w: complex, h: float = 1e-2) -> complex:
    """Five-point derivative; exact for polynomials up to degree four."""
    p = lambda x: amplification_polynomial(kind, x)
    return (-p(w + 2 * h) + 8 * p(w + h) - 8 * p(w - h) + p(w - 2 * h)) / (12 * h)


@pytest.mark.parametrize("kind", ["euler", "rk3", "rk4"])
@pytest.mark.parametrize("pt", POINTS)
def test_stage_factor_is_the_amplification_slope(kind, pt):
    # the closed forms must equal dG/dw of the one-step factor at w = -i*z
    w = -1j * pt.sigma * pt.kprime
    expect = np.real(poly_derivative(kind, w) * np.exp(1j * pt.omega_dt) * pt.dkprime_dkappa)
    assert abs(group_velocity(kind, pt) - expect) < 1e-10


def test_integrators_agree_exactly_at_sigma_zero():
    pt = GroupVelocityPoint(1.0, 0.7, 0.97 - 0.03j, 0.9 - 0.1j, 0.0)
    v = group_velocity_euler(pt)
    assert group_velocity_rk3(pt) == v
    assert group_velocity_rk4(pt) == v


@pytest.mark.parametrize("sigma", [1e-4, 1e-3])
@pytest.mark.parametrize("kind", ["euler", "rk3", "rk4"])
def test_small_sigma_correction_is_first_order(sigma, kind):
    base = GroupVelocityPoint(1.0, 0.7, 0.97 - 0.03j, 0.9 - 0.1j, 0.0)
    pt = GroupVelocityPoint(1.0, 0.7, 0.97 - 0.03j, 0.9 - 0.1j, sigma)
    dev = abs(group_velocity(kind, pt) - group_velocity(kind, base))
    assert dev <= 2.0 * sigma * abs(pt.kprime) * abs(pt.dkprime_dkappa)


def test_values_stay_finite_across_the_quarter_plane():
    for omega_dt in (np.pi / 2, np.pi):
        pt = GroupVelocityPoint(3.0, omega_dt, 1.8 - 1.5j, -1.0 - 2.0j, 1.5)
        for kind in ("euler", "rk3", "rk4"):
            assert np.isfinite(group_velocity(kind, pt))


def test_point_validation():
    with pytest.raises(ValueError):
        GroupVelocityPoint(-0.1, 0.5, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        GroupVelocityPoint(0.5, 4.0, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        GroupVelocityPoint(0.5, 0.5, 1.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        group_velocity("ab2", POINTS[0])


def test_table_derivative_is_exact_on_a_quadratic():
    kap = np.linspace(0.0, np.pi, 41)
    coeff = 0.3 - 0.2j
    table = ModifiedWavenumberTable(kap, coeff * kap**2 + 1j * kap, "analytic")
    dkp = dkappa_dk_numeric(table)
    assert np.max(np.abs(dkp - (2 * coeff * kap + 1j))) < 1e-12


def test_table_derivative_validates_the_grid():
    kap = np.array([0.0, 0.1, 0.3])
    with pytest.raises(ValueError):
        dkappa_dk_numeric(ModifiedWavenumberTable(kap, np.zeros(3, dtype=complex), "x"))
    with pytest.raises(ValueError):
        dkappa_dk_numeric(
            ModifiedWavenumberTable(np.array([0.0, 0.1]), np.zeros(2, dtype=complex), "x")
        )


def test_default_axis_excludes_the_origin():
    ax = default_axis(128)
    assert ax.shape == (128,)
    assert ax[0] > 0.0
    assert abs(ax[-1] - np.pi) < 1e-15


def test_map_routes_agree_for_a_linear_scheme():
    ax = default_axis(64)
    by_formula = gvp_map(UPW5, "rk4", 0.01, ax, ax, source="analytic", table_n_x=64)
    by_frozen = gvp_map(UPW5, "rk4", 0.01, ax, ax, source="adr-nt", table_n_x=64)
    by_evolved = gvp_map(UPW5, "rk4", 0.01, ax, ax, source="adr", table_n_x=64)
    assert np.max(np.abs(by_frozen.values - by_formula.values)) <= 1e-12
    # the evolved probe carries its own tiny time-step contamination
    assert np.max(np.abs(by_evolved.values - by_formula.values)) <= 1e-4


def test_map_approaches_one_at_the_origin():
    axis = np.array([1e-3, 2e-3])
    vmap = gvp_map(UPW5, "rk4", 0.01, axis, axis, source="analytic")
    assert abs(vmap.values[0, 0] - 1.0) <= 1e-3


def test_integrator_choice_moves_the_map_only_slightly_at_small_sigma():
    lo = gvp_map(UPW5, "euler", 0.01, source="analytic")
    hi = gvp_map(UPW5, "rk4", 0.01, source="analytic")
    assert np.max(np.abs(lo.values - hi.values)) <= 0.03


def _flat_map(value: float) -> GvpMap:
    ax = np.array([0.5, 1.0, 1.5])
    return GvpMap(ax, ax, np.full((3, 3), value), 0.5, "rk4", "analytic")


def test_area_counts_band_membership():
    assert gvp_area(_flat_map(1.0)) == 1.0
    assert gvp_area(_flat_map(0.5)) == 0.0
    mixed = GvpMap(
        np.array([0.5, 1.0]),
        np.array([0.5, 1.0]),
        np.array([[1.0, 0.2], [1.04, 2.0]]),
        0.5,
        "rk4",
        "analytic",
    )
    assert gvp_area(mixed) == 0.5
    assert gvp_area(mixed, kappa_max=0.5) == 0.5
    with pytest.raises(ValueError):
        gvp_area(mixed, kappa_max=0.1)


def test_classify_splits_below_inside_above():
    vmap = GvpMap(
        np.array([0.5]),
        np.array([0.5, 1.0, 1.5]),
        np.array([[0.90, 1.00, 1.20]]),
        0.5,
        "rk4",
        "analytic",
    )
    assert vmap.classify().tolist() == [[-1, 0, 1]]
    lo, hi = GVP_BAND
    assert lo == 0.95 and hi == 1.05


def test_map_validation():
    ax = np.array([0.5, 1.0])
    with pytest.raises(ValueError):
        GvpMap(ax, ax, np.zeros((3, 2)), 0.5, "rk4", "analytic")
    with pytest.raises(ValueError):
        GvpMap(ax, ax, np.full((2, 2), np.nan), 0.5, "rk4", "analytic")
    with pytest.raises(ValueError):
        gvp_map(UPW5, "ab2", 0.5)
    with pytest.raises(ValueError):
        gvp_map(UPW5, "rk4", -0.5)
    with pytest.raises(ValueError):
        gvp_map(UPW5, "rk4", 0.5, kappa_axis=np.array([1.0, 4.0]))
    with pytest.raises(ValueError):
        table_for_map(SchemeSpec("weno5js"), "analytic")
    with pytest.raises(ValueError):
        table_for_map(UPW5, "exact")


def test_map_csv_and_summary(tmp_path):
    ax = default_axis(16)
    vmap = gvp_map(UPW5, "rk4", 0.1, ax, ax, source="analytic", table_n_x=64)
    path = tmp_path / "map.csv"
    write_map_csv(vmap, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("kappa\\omega_dt,")
    assert len(lines) == 17
    summary = map_summary(vmap)
    for key in ("sigma", "time", "source", "shape", "gvp_band", "area_full", "area_near_origin"):
        assert key in summary
    wk, wo = NEAR_ORIGIN_WINDOW
    assert summary["area_near_origin"] == gvp_area(vmap, kappa_max=wk, omega_dt_max=wo)
    assert (tmp_path / "map.csv.json").exists()


def test_map_svg_is_valid_and_deterministic(tmp_path):
    ax = default_axis(16)
    vmap = gvp_map(UPW5, "rk4", 0.1, ax, ax, source="analytic", table_n_x=64)
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    write_map_svg(vmap, p1)
    write_map_svg(vmap, p2)
    text = p1.read_text()
    ET.fromstring(text)  # well formed
    assert BAND_COLORS["inside"] in text
    assert p1.read_bytes() == p2.read_bytes()
