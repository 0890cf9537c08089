"""Modified wavenumbers of nonlinear schemes by probe-mode evolution.

Two routes to kprime(kappa_n) on the mode grid kappa_n = 2*pi*n/N:

* Evolved probe (ADR): initialize a monochromatic field, advance it a short
  time tau with the actual scheme and integrator, and read the complex log
  of the probed mode's amplitude ratio,
  kprime = (i*dx/(c*tau)) * log(vhat(tau)/vhat(0)).
* Frozen-operator projection (ADR-NT): freeze the scheme's per-point
  equivalent linear coefficients on the initial field, apply them once, and
  project the result onto the probed mode,
  kprime = -i * what(kappa_n) / vhat0(kappa_n),
  where what is the transform of the frozen-operator output times dx.

For linear schemes both reduce exactly (ADR-NT) or to O(sigma) (ADR) to the
analytic stencil formula.  Complex probes are evolved as two real fields
(the scheme's nonlinearity acts on real data) and recombined before the
transform; a real cosine probe is also available since nonlinear weights
see the two differently.  Internally c = 1 and the domain is [0, 2*pi), so
dx = 2*pi/N; kprime is dimensionless either way.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._util import fmt, worker_count
from .errors import MeasurementError
from .schemes import SchemeSpec, derivative, frozen_coefficients
from .timeint import TimeSpec, step

#: probed mode counts as annihilated below this fraction of its start amplitude
ANNIHILATION_RATIO = 1e-14

PROBE_KINDS = ("complex", "real")


@dataclass(frozen=True)
class AdrConfig:
    """Grid and probe parameters for the evolved-probe procedure.

    tau is the total evolution time, reached in round(tau/dt) steps of the
    caller's integrator.  phase_count > 1 averages tables over runs whose
    probes carry random initial phases (seeded); the first run always uses
    phase 0 so phase_count = 1 is the plain single-probe table.
    """

    n_x: int = 422
    tau: float = 1e-8
    dt: float = 1e-8
    phase_count: int = 1
    amplitude: float = 1.0
    probe: str = "complex"
    seed: int = 0

    def __post_init__(self):
        if self.n_x < 8:
            raise ValueError(f"n_x must be >= 8, got {self.n_x}")
        if not (self.tau > 0.0 and self.dt > 0.0):
            raise ValueError("tau and dt must be positive")
        steps = round(self.tau / self.dt)
        if steps < 1 or abs(steps * self.dt - self.tau) > 1e-9 * self.tau:
            raise ValueError(f"tau = {self.tau:g} is not a whole number of dt = {self.dt:g} steps")
        if self.phase_count < 1:
            raise ValueError(f"phase_count must be >= 1, got {self.phase_count}")
        if not self.amplitude > 0.0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if self.probe not in PROBE_KINDS:
            raise ValueError(f"probe must be one of {PROBE_KINDS}, got {self.probe!r}")

    @property
    def n_steps(self) -> int:
        return round(self.tau / self.dt)


@dataclass(frozen=True)
class ModifiedWavenumberTable:
    """kprime sampled on the nonnegative mode grid of one n_x.

    kappas runs from 0 to pi (inclusive for even n_x); kprime is complex,
    NaN where a probe was annihilated.  meta records how the table was made.
    """

    kappas: np.ndarray
    kprime: np.ndarray
    source: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        kap = np.asarray(self.kappas, dtype=float)
        kp = np.asarray(self.kprime, dtype=complex)
        if kap.ndim != 1 or kp.shape != kap.shape or kap.size < 2:
            raise ValueError("kappas and kprime must be matching 1D arrays (>= 2 entries)")
        if np.any(np.diff(kap) <= 0):
            raise ValueError("kappas must be strictly increasing")
        if kap[0] < 0 or kap[-1] > np.pi + 1e-12:
            raise ValueError("kappas must lie in [0, pi]")
        object.__setattr__(self, "kappas", kap)
        object.__setattr__(self, "kprime", kp)


def kappa_grid(n_x: int) -> np.ndarray:
    """Nonnegative DFT mode wavenumbers 2*pi*n/n_x, n = 0 .. n_x//2."""
    return 2.0 * np.pi * np.arange(n_x // 2 + 1) / n_x


def _probe_field(n_x: int, mode: int, amplitude: float, phase: float, probe: str) -> np.ndarray:
    theta = 2.0 * np.pi * mode * np.arange(n_x) / n_x + phase
    if probe == "complex":
        return amplitude * np.exp(1j * theta)
    return amplitude * np.cos(theta)


def _split_rhs(scheme: SchemeSpec, dx: float):
    """RHS of u_t + u_x = 0; complex states evolve as two real fields."""

    def rhs(u: np.ndarray) -> np.ndarray:
        if np.iscomplexobj(u):
            return -(derivative(u.real, scheme, dx) + 1j * derivative(u.imag, scheme, dx))
        return -derivative(u, scheme, dx)

    return rhs


def _mode_coefficient(v: np.ndarray, mode: int) -> complex:
    return complex(np.fft.fft(v)[mode] / v.size)


def adr_kprime_at_mode(
    scheme: SchemeSpec,
    time: TimeSpec,
    cfg: AdrConfig,
    mode: int,
    phase: float = 0.0,
) -> complex:
    """Evolved-probe kprime at a single mode index (NaN if annihilated)."""
    n_x = cfg.n_x
    if not 0 <= mode <= n_x // 2:
        raise ValueError(f"mode {mode} outside 0 .. {n_x // 2}")
    if abs(time.dt - cfg.dt) > 1e-15 * cfg.dt:
        raise ValueError("TimeSpec.dt and AdrConfig.dt disagree")
    dx = 2.0 * np.pi / n_x
    v = _probe_field(n_x, mode, cfg.amplitude, phase, cfg.probe)
    v0 = v.copy()
    rhs = _split_rhs(scheme, dx)
    for _ in range(cfg.n_steps):
        v = step(v, rhs, time)
    c0 = _mode_coefficient(v0, mode)
    if c0 == 0:
        raise ValueError(f"probe carries no content at mode {mode}")
    c1 = _mode_coefficient(v, mode)
    if abs(c1) < ANNIHILATION_RATIO * abs(c0):
        return complex(np.nan, np.nan)
    ratio = c1 / c0
    # principal branch of the log; refuse if the phase advance is about to wrap
    if abs(np.angle(ratio)) >= np.pi * (1.0 - 1e-9):
        raise MeasurementError(
            f"mode {mode}: phase advance |{np.angle(ratio):.3f}| reaches the log branch cut; "
            "reduce tau"
        )
    return complex(1j * dx / cfg.tau * np.log(ratio))


def adr_modified_wavenumber(
    scheme: SchemeSpec,
    time: TimeSpec,
    cfg: AdrConfig,
    modes: np.ndarray | None = None,
) -> ModifiedWavenumberTable:
    """Evolved-probe kprime table over modes 0 .. n_x//2 (or a subset).

    With phase_count > 1 the table is the dealiasing average over probes
    with random initial phases (the first phase is always 0).
    """
    n_x = cfg.n_x
    mode_idx = np.arange(n_x // 2 + 1) if modes is None else np.asarray(modes, dtype=int)
    rng = np.random.default_rng(cfg.seed)
    phases = [0.0] + list(rng.uniform(0.0, 2.0 * np.pi, cfg.phase_count - 1))

    def table_for_phase(phase: float) -> ModifiedWavenumberTable:
        kp = np.empty(mode_idx.size, dtype=complex)
        workers = worker_count()
        if workers > 1 and mode_idx.size > 4:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = pool.map(
                    lambda n: adr_kprime_at_mode(scheme, time, cfg, int(n), phase), mode_idx
                )
                kp[:] = list(results)
        else:
            for i, n in enumerate(mode_idx):
                kp[i] = adr_kprime_at_mode(scheme, time, cfg, int(n), phase)
        return ModifiedWavenumberTable(
            kappas=2.0 * np.pi * mode_idx / n_x,
            kprime=kp,
            source="adr",
            meta={
                "scheme": scheme.kind,
                "epsilon": scheme.epsilon,
                "time": time.kind,
                "n_x": n_x,
                "tau": cfg.tau,
                "dt": cfg.dt,
                "probe": cfg.probe,
                "amplitude": cfg.amplitude,
                "phase": phase,
            },
        )

    tables = [table_for_phase(p) for p in phases]
    if len(tables) == 1:
        return tables[0]
    out = dealias_table(tables)
    meta = dict(out.meta)
    meta.update(phase_count=cfg.phase_count, seed=cfg.seed)
    meta.pop("phase", None)
    return replace(out, meta=meta)


def dealias_table(tables: list[ModifiedWavenumberTable]) -> ModifiedWavenumberTable:
    """Average tables from phase-shifted probes; a single table passes through."""
    if not tables:
        raise ValueError("need at least one table")
    first = tables[0]
    for t in tables[1:]:
        if t.kappas.shape != first.kappas.shape or np.any(np.abs(t.kappas - first.kappas) > 1e-12):
            raise ValueError("tables must share one kappa grid")
    if len(tables) == 1:
        return first
    kp = np.mean([t.kprime for t in tables], axis=0)
    return ModifiedWavenumberTable(
        kappas=first.kappas.copy(),
        kprime=kp,
        source=first.source,
        meta={**first.meta, "averaged_tables": len(tables)},
    )


def adr_nt_kprime(scheme: SchemeSpec, init: np.ndarray, mode: int) -> complex:
    """Frozen-operator kprime at one mode from the given probe field.

    A complex init is split into real and imaginary parts, each frozen and
    transported separately.  The probed mode must be present in init.
    """
    v = np.asarray(init)
    if v.ndim != 1 or v.size < 8:
        raise ValueError(f"init must be a 1D field of >= 8 samples, got shape {v.shape}")
    n_x = v.size
    if not 0 <= mode <= n_x // 2:
        raise ValueError(f"mode {mode} outside 0 .. {n_x // 2}")
    # frozen apply with dx = 1 gives the bare weighted sum; kprime carries no dx
    if np.iscomplexobj(v):
        w = (
            frozen_coefficients(scheme, v.real).apply(v.real, 1.0)
            + 1j * frozen_coefficients(scheme, v.imag).apply(v.imag, 1.0)
        )
    else:
        w = frozen_coefficients(scheme, v).apply(v, 1.0)
    vhat0 = _mode_coefficient(v, mode)
    if vhat0 == 0:
        raise ValueError(f"probe carries no content at mode {mode}")
    what = _mode_coefficient(w, mode)
    return complex(-1j * what / vhat0)


def adr_nt_table(
    scheme: SchemeSpec,
    n_x: int,
    modes: np.ndarray | None = None,
    probe: str = "complex",
    amplitude: float = 1.0,
) -> ModifiedWavenumberTable:
    """Frozen-operator kprime table over modes 0 .. n_x//2 (or a subset)."""
    if probe not in PROBE_KINDS:
        raise ValueError(f"probe must be one of {PROBE_KINDS}, got {probe!r}")
    mode_idx = np.arange(n_x // 2 + 1) if modes is None else np.asarray(modes, dtype=int)
    kp = np.empty(mode_idx.size, dtype=complex)
    for i, n in enumerate(mode_idx):
        init = _probe_field(n_x, int(n), amplitude, 0.0, probe)
        kp[i] = adr_nt_kprime(scheme, init, int(n))
    return ModifiedWavenumberTable(
        kappas=2.0 * np.pi * mode_idx / n_x,
        kprime=kp,
        source="adr-nt",
        meta={
            "scheme": scheme.kind,
            "epsilon": scheme.epsilon,
            "n_x": n_x,
            "probe": probe,
            "amplitude": amplitude,
        },
    )


def analytic_table(scheme: SchemeSpec, n_x: int) -> ModifiedWavenumberTable:
    """Exact stencil-formula table for a linear scheme on the mode grid."""
    from .schemes import modified_wavenumber_linear

    kap = kappa_grid(n_x)
    return ModifiedWavenumberTable(
        kappas=kap,
        kprime=np.asarray(modified_wavenumber_linear(scheme.linear_stencil, kap)),
        source="analytic",
        meta={"scheme": scheme.kind, "n_x": n_x},
    )


def write_table_csv(table: ModifiedWavenumberTable, path: str | Path) -> None:
    """kappa,re_kprime,im_kprime rows at 17 significant digits, plus a JSON sidecar."""
    path = Path(path)
    lines = ["kappa,re_kprime,im_kprime"]
    for kap, kp in zip(table.kappas, table.kprime):
        lines.append(f"{fmt(kap)},{fmt(kp.real)},{fmt(kp.imag)}")
    path.write_text("\n".join(lines) + "\n")
    sidecar = path.with_suffix(path.suffix + ".json")
    sidecar.write_text(json.dumps({"source": table.source, **table.meta}, indent=2, sort_keys=True) + "\n")


def read_table_csv(path: str | Path) -> ModifiedWavenumberTable:
    path = Path(path)
    rows = path.read_text().strip().splitlines()
    if not rows or rows[0].strip() != "kappa,re_kprime,im_kprime":
        raise ValueError(f"{path} is not a modified-wavenumber table")
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    meta: dict = {}
    source = "file"
    sidecar = path.with_suffix(path.suffix + ".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        source = meta.pop("source", "file")
    return ModifiedWavenumberTable(
        kappas=data[:, 0], kprime=data[:, 1] + 1j * data[:, 2], source=source, meta=meta
    )
