"""Quasi-linear group-velocity maps over the (k*dx, omega*dt) plane.

A scheme's modified wavenumber kprime(kappa) (analytic for linear stencils,
probe-derived tables for WENO) is pushed through the time integrator's
dispersion relation to give the normalized group velocity

    euler:  v_g/c = Re( e^{i w} dkprime/dkappa )
    rk3:    v_g/c = Re( (1 - i z - z^2/2) e^{i w} dkprime/dkappa )
    rk4:    v_g/c = Re( (1 - i z - z^2/2 + i z^3/6) e^{i w} dkprime/dkappa )

with w = omega*dt an independent map coordinate, z = sigma*kprime, and
sigma = c*dt/dx a fixed map parameter.  The parenthesized factors are the
derivatives of the integrators' amplification polynomials, so at sigma = 0
all three collapse to the euler form.  Group-velocity-preserving (GVP)
cells are those with v_g/c in [0.95, 1.05].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._util import fmt
from .adr import AdrConfig, ModifiedWavenumberTable, adr_modified_wavenumber, adr_nt_table, analytic_table
from .schemes import SchemeSpec
from .timeint import TIME_KINDS, TimeSpec

GVP_BAND = (0.95, 1.05)

#: "near the origin" comparison window, as fractions of the (0, pi] axes
NEAR_ORIGIN_WINDOW = (np.pi / 4, np.pi / 4)

MAP_SOURCES = ("analytic", "adr", "adr-nt")


@dataclass(frozen=True)
class GroupVelocityPoint:
    """One evaluation point: map coordinates plus the scheme data there."""

    kappa: float
    omega_dt: float
    kprime: complex
    dkprime_dkappa: complex
    sigma: float

    def __post_init__(self):
        if not 0.0 <= self.kappa <= np.pi + 1e-12:
            raise ValueError(f"kappa must lie in [0, pi], got {self.kappa}")
        if not 0.0 <= self.omega_dt <= np.pi + 1e-12:
            raise ValueError(f"omega_dt must lie in [0, pi], got {self.omega_dt}")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def _stage_factor(kind: str, z: np.ndarray | complex) -> np.ndarray | complex:
    """Derivative of the amplification polynomial, evaluated at -i*z."""
    if kind == "euler":
        return np.ones_like(np.asarray(z, dtype=complex))
    if kind == "rk3":
        return 1 - 1j * z - z**2 / 2
    if kind == "rk4":
        return 1 - 1j * z - z**2 / 2 + 1j * z**3 / 6
    raise ValueError(f"unknown time integrator {kind!r}")


def _group_velocity(kind: str, pt: GroupVelocityPoint) -> float:
    z = pt.sigma * pt.kprime
    v = _stage_factor(kind, z) * np.exp(1j * pt.omega_dt) * pt.dkprime_dkappa
    return float(np.real(v))


def group_velocity_euler(pt: GroupVelocityPoint) -> float:
    return _group_velocity("euler", pt)


def group_velocity_rk3(pt: GroupVelocityPoint) -> float:
    return _group_velocity("rk3", pt)


def group_velocity_rk4(pt: GroupVelocityPoint) -> float:
    return _group_velocity("rk4", pt)


def group_velocity(kind: str, pt: GroupVelocityPoint) -> float:
    if kind not in TIME_KINDS:
        raise ValueError(f"unknown time integrator {kind!r}")
    return _group_velocity(kind, pt)


def dkappa_dk_numeric(table: ModifiedWavenumberTable) -> np.ndarray:
    """dkprime/dkappa on the table grid by second-order differences.

    Central differences at interior nodes, one-sided three-point stencils at
    the two ends.  Requires a uniform kappa grid of at least 3 nodes.
    """
    kap = table.kappas
    kp = table.kprime
    if kap.size < 3:
        raise ValueError("need at least 3 table nodes to differentiate")
    dk = np.diff(kap)
    if np.any(np.abs(dk - dk[0]) > 1e-9 * dk[0]):
        raise ValueError("table kappa grid must be uniform")
    h = dk[0]
    out = np.empty_like(kp)
    out[1:-1] = (kp[2:] - kp[:-2]) / (2 * h)
    out[0] = (-3 * kp[0] + 4 * kp[1] - kp[2]) / (2 * h)
    out[-1] = (3 * kp[-1] - 4 * kp[-2] + kp[-3]) / (2 * h)
    return out


@dataclass(frozen=True)
class GvpMap:
    """Normalized group velocity sampled on a (kappa, omega_dt) grid.

    values[i, j] corresponds to kappa_axis[i], omega_dt_axis[j].
    """

    kappa_axis: np.ndarray
    omega_dt_axis: np.ndarray
    values: np.ndarray
    sigma: float
    time_kind: str
    source: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ka = np.asarray(self.kappa_axis, dtype=float)
        oa = np.asarray(self.omega_dt_axis, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (ka.size, oa.size):
            raise ValueError(f"values shape {v.shape} does not match axes ({ka.size}, {oa.size})")
        if not np.all(np.isfinite(v)):
            raise ValueError("map contains non-finite values")
        object.__setattr__(self, "kappa_axis", ka)
        object.__setattr__(self, "omega_dt_axis", oa)
        object.__setattr__(self, "values", v)

    def classify(self) -> np.ndarray:
        """-1 below the GVP band, 0 inside, +1 above."""
        lo, hi = GVP_BAND
        out = np.zeros(self.values.shape, dtype=int)
        out[self.values < lo] = -1
        out[self.values > hi] = 1
        return out


def default_axis(n: int = 256) -> np.ndarray:
    """n points spanning (0, pi]; the origin itself is excluded."""
    return np.linspace(0.0, np.pi, n + 1)[1:]


def _interp_complex(x: np.ndarray, xp: np.ndarray, fp: np.ndarray) -> np.ndarray:
    return np.interp(x, xp, fp.real) + 1j * np.interp(x, xp, fp.imag)


def table_for_map(
    scheme: SchemeSpec,
    source: str,
    table_n_x: int = 422,
    adr_config: AdrConfig | None = None,
    time_kind: str = "euler",
) -> ModifiedWavenumberTable:
    """Build the kprime table a map will interpolate from."""
    if source == "analytic":
        if not scheme.is_linear:
            raise ValueError(f"analytic kprime requires a linear scheme, got {scheme.kind!r}")
        return analytic_table(scheme, table_n_x)
    if source == "adr":
        cfg = adr_config or AdrConfig(n_x=table_n_x)
        return adr_modified_wavenumber(scheme, TimeSpec(time_kind, cfg.dt), cfg)
    if source == "adr-nt":
        return adr_nt_table(scheme, table_n_x)
    raise ValueError(f"unknown kprime source {source!r}, expected one of {MAP_SOURCES}")


def gvp_map(
    scheme: SchemeSpec,
    time_kind: str,
    sigma: float,
    kappa_axis: np.ndarray | None = None,
    omega_dt_axis: np.ndarray | None = None,
    source: str = "analytic",
    table: ModifiedWavenumberTable | None = None,
    table_n_x: int = 422,
    adr_config: AdrConfig | None = None,
) -> GvpMap:
    """Evaluate the group-velocity map for one scheme/integrator/sigma.

    kprime and its numeric derivative are computed on the table's mode grid
    and linearly interpolated onto kappa_axis; the time axis enters only
    through the closed-form factors, so the map is an outer product sweep.
    """
    if time_kind not in TIME_KINDS:
        raise ValueError(f"unknown time integrator {time_kind!r}")
    if sigma < 0.0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    ka = default_axis() if kappa_axis is None else np.asarray(kappa_axis, dtype=float)
    oa = default_axis() if omega_dt_axis is None else np.asarray(omega_dt_axis, dtype=float)
    if np.any(ka < 0) or np.any(oa < 0) or np.any(ka > np.pi + 1e-12) or np.any(oa > np.pi + 1e-12):
        raise ValueError("map axes must lie within [0, pi]")
    if table is None:
        table = table_for_map(scheme, source, table_n_x, adr_config)
    if ka.min() < table.kappas[0] - 1e-12 or ka.max() > table.kappas[-1] + 1e-12:
        raise ValueError("kappa axis extends beyond the kprime table range")
    if np.any(~np.isfinite(table.kprime)):
        raise ValueError("kprime table contains annihilated (NaN) entries")
    dkp = dkappa_dk_numeric(table)
    kp = _interp_complex(ka, table.kappas, table.kprime)
    dk = _interp_complex(ka, table.kappas, dkp)
    factor = _stage_factor(time_kind, sigma * kp) * dk  # per-kappa complex factor
    phase = np.exp(1j * oa)
    values = np.real(np.outer(factor, phase))
    return GvpMap(
        kappa_axis=ka,
        omega_dt_axis=oa,
        values=values,
        sigma=sigma,
        time_kind=time_kind,
        source=table.source,
        meta={"scheme": scheme.kind, "table": dict(table.meta)},
    )


def gvp_area(
    vmap: GvpMap,
    kappa_max: float | None = None,
    omega_dt_max: float | None = None,
) -> float:
    """Fraction of map cells inside the GVP band, optionally windowed.

    kappa_max/omega_dt_max restrict the count to cells with coordinates at
    or below the given bounds (the "near the origin" comparison).
    """
    mask_k = np.ones(vmap.kappa_axis.size, dtype=bool)
    mask_o = np.ones(vmap.omega_dt_axis.size, dtype=bool)
    if kappa_max is not None:
        mask_k = vmap.kappa_axis <= kappa_max + 1e-12
    if omega_dt_max is not None:
        mask_o = vmap.omega_dt_axis <= omega_dt_max + 1e-12
    sub = vmap.values[np.ix_(mask_k, mask_o)]
    if sub.size == 0:
        raise ValueError("area window contains no map cells")
    lo, hi = GVP_BAND
    return float(np.mean((sub >= lo) & (sub <= hi)))


def write_map_csv(vmap: GvpMap, path: str | Path) -> None:
    """Matrix CSV: header row of omega*dt values, then one row per kappa."""
    path = Path(path)
    header = "kappa\\omega_dt," + ",".join(fmt(w) for w in vmap.omega_dt_axis)
    lines = [header]
    for kap, row in zip(vmap.kappa_axis, vmap.values):
        lines.append(fmt(kap) + "," + ",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    sidecar = path.with_suffix(path.suffix + ".json")
    sidecar.write_text(json.dumps(map_summary(vmap), indent=2, sort_keys=True) + "\n")


def map_summary(vmap: GvpMap) -> dict:
    wk, wo = NEAR_ORIGIN_WINDOW
    return {
        "sigma": vmap.sigma,
        "time": vmap.time_kind,
        "source": vmap.source,
        "shape": list(vmap.values.shape),
        "gvp_band": list(GVP_BAND),
        "area_full": gvp_area(vmap),
        "area_near_origin": gvp_area(vmap, kappa_max=wk, omega_dt_max=wo),
        **vmap.meta,
    }


BAND_COLORS = {"below": "#4575b4", "inside": "#1a9850", "above": "#d73027"}

_PI_TICKS = ((0.0, "0"), (0.25, "π/4"), (0.5, "π/2"), (0.75, "3π/4"), (1.0, "π"))


def _cell_bounds(axis: np.ndarray) -> np.ndarray:
    """Cell edges around axis points: midpoints inside, half-spacing at the ends."""
    mids = 0.5 * (axis[:-1] + axis[1:])
    lo = max(0.0, axis[0] - 0.5 * (axis[1] - axis[0]))
    hi = min(np.pi, axis[-1] + 0.5 * (axis[-1] - axis[-2]))
    return np.concatenate([[lo], mids, [hi]])


def write_map_svg(vmap: GvpMap, path: str | Path, width: int = 720, height: int = 560) -> None:
    """Render the map as a three-color band plot (below / inside / above).

    Cells are merged into vertical runs of equal class per kappa column, so
    file size stays modest at any resolution.  kappa runs horizontally,
    omega*dt vertically with the origin at the lower left.  Output depends
    only on the map contents; no timestamps or random ids.
    """
    classes = vmap.classify()
    ml, mr, mt, mb = 70.0, 18.0, 58.0, 52.0
    pw, ph = width - ml - mr, height - mt - mb
    kb = _cell_bounds(vmap.kappa_axis)
    ob = _cell_bounds(vmap.omega_dt_axis)

    def px(k: float) -> float:
        return ml + pw * k / np.pi

    def py(w: float) -> float:
        return mt + ph * (1.0 - w / np.pi)

    colors = {-1: BAND_COLORS["below"], 0: BAND_COLORS["inside"], 1: BAND_COLORS["above"]}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        '<rect width="100%" height="100%" fill="white"/>',
        '<g shape-rendering="crispEdges">',
    ]
    for i in range(vmap.kappa_axis.size):
        x0, x1 = px(kb[i]), px(kb[i + 1])
        col = classes[i]
        j = 0
        while j < col.size:
            k = j
            while k < col.size and col[k] == col[j]:
                k += 1
            y0, y1 = py(ob[k]), py(ob[j])
            parts.append(
                f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
                f'height="{y1 - y0:.2f}" fill="{colors[int(col[j])]}"/>'
            )
            j = k
    parts.append("</g>")
    # frame and ticks
    parts.append(
        f'<rect x="{ml:.2f}" y="{mt:.2f}" width="{pw:.2f}" height="{ph:.2f}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    for frac, label in _PI_TICKS:
        x = px(frac * np.pi)
        y = py(frac * np.pi)
        parts.append(f'<line x1="{x:.2f}" y1="{mt + ph:.2f}" x2="{x:.2f}" y2="{mt + ph + 5:.2f}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{mt + ph + 20:.2f}" font-size="13" text-anchor="middle">{label}</text>')
        parts.append(f'<line x1="{ml - 5:.2f}" y1="{y:.2f}" x2="{ml:.2f}" y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{ml - 9:.2f}" y="{y + 4:.2f}" font-size="13" text-anchor="end">{label}</text>')
    parts.append(
        f'<text x="{ml + pw / 2:.2f}" y="{height - 12:.2f}" font-size="14" text-anchor="middle">kΔx</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.2f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2:.2f})">ωΔt</text>'
    )
    scheme = vmap.meta.get("scheme", "")
    title = f"{scheme} + {vmap.time_kind}, sigma = {vmap.sigma:g}"
    parts.append(f'<text x="{ml:.2f}" y="20" font-size="15">{title}</text>')
    # legend, one swatch per class
    lo, hi = GVP_BAND
    legend = ((BAND_COLORS["below"], f"ratio &lt; {lo:g}"), (BAND_COLORS["inside"], f"{lo:g} to {hi:g}"),
              (BAND_COLORS["above"], f"ratio &gt; {hi:g}"))
    x = ml
    for color, text in legend:
        parts.append(f'<rect x="{x:.2f}" y="30" width="14" height="12" fill="{color}"/>')
        parts.append(f'<text x="{x + 19:.2f}" y="40" font-size="12">{text}</text>')
        x += 150
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
