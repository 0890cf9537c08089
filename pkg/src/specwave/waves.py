"""1D wave propagation experiments and velocity measurements.

Periodic advection u_t + c u_x = 0, a one-way coupled system
(u_t + u_x = p, p_t + a p_x = 0) whose exact solution is a two-mode
combination wave with a controllable envelope speed, and three ways to
measure propagation velocities from the discrete data:

* spectral: slope of the evolved-probe modified wavenumber across the two
  modes bracketing a target wavenumber (a group velocity),
* envelope: displacement rate of the analytic-signal envelope between
  snapshots (a group velocity),
* peak: displacement rate of a tracked wave crest (a phase velocity).

Envelope and crest displacements are accumulated incrementally through the
stored history: each snapshot-to-snapshot shift is unwrapped into the
nearest periodic representative, which keeps measurements well defined on
periodic data where a two-snapshot comparison alone is ambiguous.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ._util import fmt
from .adr import AdrConfig, adr_kprime_at_mode
from .dft import hilbert_envelope
from .errors import MeasurementError, StabilityError
from .schemes import SchemeSpec, derivative
from .timeint import TimeSpec, step

#: refuse runs above this CFL number
SIGMA_LIMIT = 1.0

#: default number of stored snapshots per run (ends always included)
DEFAULT_SNAPSHOTS = 50


@dataclass(frozen=True)
class AdvectionProblem:
    """u_t + c u_x = 0 on a periodic interval, c > 0."""

    c: float
    x_lo: float
    x_hi: float
    n_x: int
    dt: float
    t_final: float
    u0: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError(f"transport speed must be positive, got {self.c}")
        if not self.x_hi > self.x_lo:
            raise ValueError("domain must satisfy x_hi > x_lo")
        if self.n_x < 8:
            raise ValueError(f"n_x must be >= 8, got {self.n_x}")
        if not (self.dt > 0.0 and self.t_final > 0.0):
            raise ValueError("dt and t_final must be positive")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_x

    @property
    def x(self) -> np.ndarray:
        return self.x_lo + self.dx * np.arange(self.n_x)

    @property
    def sigma(self) -> float:
        return self.c * self.dt / self.dx


@dataclass(frozen=True)
class CoupledProblem:
    """u_t + u_x = p driven by p_t + a p_x = 0, both periodic, a > 0."""

    a: float
    x_lo: float
    x_hi: float
    n_x: int
    dt: float
    t_final: float
    u0: Callable[[np.ndarray], np.ndarray]
    p0: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"driver transport speed must be positive, got {self.a}")
        if not self.x_hi > self.x_lo:
            raise ValueError("domain must satisfy x_hi > x_lo")
        if self.n_x < 8:
            raise ValueError(f"n_x must be >= 8, got {self.n_x}")
        if not (self.dt > 0.0 and self.t_final > 0.0):
            raise ValueError("dt and t_final must be positive")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_x

    @property
    def x(self) -> np.ndarray:
        return self.x_lo + self.dx * np.arange(self.n_x)

    @property
    def sigma(self) -> float:
        return max(1.0, self.a) * self.dt / self.dx


@dataclass(frozen=True)
class CombinationWaveSpec:
    """Superposition cos(k1 x - w1 t) + cos(k2 x - w2 t) with k1 = w1.

    Written as a carrier times an envelope it moves with phase velocity
    (w2 + w1)/(k2 + k1) while the envelope travels at (w2 - w1)/(k2 - k1).
    It solves the coupled system exactly when the driver is
    p = (w2 - k2) sin(k2 x - w2 t) advected at a = w2/k2.
    """

    k1: float
    omega1: float
    k2: float
    omega2: float

    def __post_init__(self):
        if abs(self.k1 - self.omega1) > 1e-12 * max(1.0, abs(self.k1)):
            raise ValueError("the first component must ride the u-equation: k1 = omega1")
        if abs(self.k2 - self.k1) < 1e-12:
            raise ValueError("k2 must differ from k1 for a finite envelope speed")
        if self.k2 == 0:
            raise ValueError("k2 must be nonzero")

    @property
    def v_group(self) -> float:
        return (self.omega2 - self.omega1) / (self.k2 - self.k1)

    @property
    def v_phase(self) -> float:
        return (self.omega2 + self.omega1) / (self.k2 + self.k1)

    @property
    def advection_speed(self) -> float:
        return self.omega2 / self.k2

    def u_exact(self, x: np.ndarray, t: float) -> np.ndarray:
        return np.cos(self.k1 * x - self.omega1 * t) + np.cos(self.k2 * x - self.omega2 * t)

    def p_exact(self, x: np.ndarray, t: float) -> np.ndarray:
        return (self.omega2 - self.k2) * np.sin(self.k2 * x - self.omega2 * t)

    def envelope_exact(self, x: np.ndarray, t: float) -> np.ndarray:
        # magnitude of the slow beat factor; the signed factor changes sign
        # at its nodes while an envelope must not
        return np.abs(
            2.0 * np.cos(0.5 * (self.k2 - self.k1) * x - 0.5 * (self.omega2 - self.omega1) * t)
        )


def combination_wave_init(spec: CombinationWaveSpec, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Initial (u, p) samples of the combination wave."""
    x = np.asarray(x, dtype=float)
    return spec.u_exact(x, 0.0), spec.p_exact(x, 0.0)


@dataclass(frozen=True)
class WaveHistory:
    """Stored snapshots of one run: u (and p for coupled systems) over time."""

    x: np.ndarray
    times: np.ndarray
    u: np.ndarray  # shape (n_snapshots, n_x)
    p: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.u.shape != (self.times.size, self.x.size):
            raise ValueError("u must have shape (len(times), len(x))")
        if self.p is not None and self.p.shape != self.u.shape:
            raise ValueError("p must match u's shape")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def index_of_time(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"history has no snapshot at t = {t:g}")
        return i


def _resolve_steps(dt: float, t_final: float) -> int:
    n = round(t_final / dt)
    if n < 1 or abs(n * dt - t_final) > 1e-9 * t_final:
        raise ValueError(f"t_final = {t_final:g} is not a whole number of dt = {dt:g} steps")
    return n


def _snapshot_steps(n_steps: int, n_snapshots: int) -> set[int]:
    keep = np.unique(np.round(np.linspace(0, n_steps, min(n_snapshots, n_steps) + 1)).astype(int))
    return set(int(k) for k in keep)


def _check_sigma(sigma: float) -> None:
    if sigma > SIGMA_LIMIT:
        raise StabilityError(
            f"refusing to run at CFL number sigma = {sigma:.4g} > {SIGMA_LIMIT:g}", sigma=sigma
        )


def solve_advection(
    prob: AdvectionProblem,
    scheme: SchemeSpec,
    time: TimeSpec,
    n_snapshots: int = DEFAULT_SNAPSHOTS,
) -> WaveHistory:
    """March the advection problem and record snapshots."""
    if abs(time.dt - prob.dt) > 1e-15 * prob.dt:
        raise ValueError("TimeSpec.dt and problem dt disagree")
    _check_sigma(prob.sigma)
    n_steps = _resolve_steps(prob.dt, prob.t_final)
    keep = _snapshot_steps(n_steps, n_snapshots)
    dx = prob.dx
    c = prob.c

    def rhs(u: np.ndarray) -> np.ndarray:
        return -c * derivative(u, scheme, dx, c=c)

    u = np.asarray(prob.u0(prob.x), dtype=float)
    if u.shape != prob.x.shape:
        raise ValueError("u0 must return one sample per grid point")
    times = [0.0]
    states = [u.copy()]
    for k in range(1, n_steps + 1):
        u = step(u, rhs, time)
        if k in keep:
            times.append(k * prob.dt)
            states.append(u.copy())
    return WaveHistory(
        x=prob.x,
        times=np.asarray(times),
        u=np.asarray(states),
        meta={
            "kind": "advection",
            "scheme": scheme.kind,
            "epsilon": scheme.epsilon,
            "time": time.kind,
            "c": prob.c,
            "x_lo": prob.x_lo,
            "x_hi": prob.x_hi,
            "n_x": prob.n_x,
            "dt": prob.dt,
            "t_final": prob.t_final,
            "sigma": prob.sigma,
        },
    )


def solve_coupled(
    prob: CoupledProblem,
    scheme: SchemeSpec,
    time: TimeSpec,
    n_snapshots: int = DEFAULT_SNAPSHOTS,
) -> WaveHistory:
    """March the coupled (u, p) system and record snapshots of both fields."""
    if abs(time.dt - prob.dt) > 1e-15 * prob.dt:
        raise ValueError("TimeSpec.dt and problem dt disagree")
    _check_sigma(prob.sigma)
    n_steps = _resolve_steps(prob.dt, prob.t_final)
    keep = _snapshot_steps(n_steps, n_snapshots)
    dx = prob.dx
    a = prob.a

    def rhs(state: np.ndarray) -> np.ndarray:
        u, p = state
        du = -derivative(u, scheme, dx, c=1.0) + p
        dp = -a * derivative(p, scheme, dx, c=a)
        return np.stack([du, dp])

    u = np.asarray(prob.u0(prob.x), dtype=float)
    p = np.asarray(prob.p0(prob.x), dtype=float)
    if u.shape != prob.x.shape or p.shape != prob.x.shape:
        raise ValueError("u0/p0 must return one sample per grid point")
    state = np.stack([u, p])
    times = [0.0]
    u_hist = [u.copy()]
    p_hist = [p.copy()]
    for k in range(1, n_steps + 1):
        state = step(state, rhs, time)
        if k in keep:
            times.append(k * prob.dt)
            u_hist.append(state[0].copy())
            p_hist.append(state[1].copy())
    return WaveHistory(
        x=prob.x,
        times=np.asarray(times),
        u=np.asarray(u_hist),
        p=np.asarray(p_hist),
        meta={
            "kind": "coupled",
            "scheme": scheme.kind,
            "epsilon": scheme.epsilon,
            "time": time.kind,
            "a": prob.a,
            "x_lo": prob.x_lo,
            "x_hi": prob.x_hi,
            "n_x": prob.n_x,
            "dt": prob.dt,
            "t_final": prob.t_final,
            "sigma": prob.sigma,
        },
    )


def measure_group_velocity_dft(
    scheme: SchemeSpec,
    time: TimeSpec,
    n_x: int,
    dt: float,
    tau: float,
    target_kappa: float,
    delta_kappa: float | None = None,
    probe: str = "real",
    amplitude: float = 1.0,
) -> float:
    """Group velocity (in units of c) at a target wavenumber from probe runs.

    The target snaps to the nearest DFT mode; kprime is measured by evolved
    probes at the modes one delta_kappa below and above, and the group
    velocity is the slope of Re kprime across them.  delta_kappa defaults to
    one mode spacing 2*pi/n_x and must itself be a whole number of modes.
    """
    mode_spacing = 2.0 * np.pi / n_x
    target_mode = round(target_kappa / mode_spacing)
    d_modes = 1 if delta_kappa is None else round(delta_kappa / mode_spacing)
    if d_modes < 1 or (
        delta_kappa is not None and abs(d_modes * mode_spacing - delta_kappa) > 1e-9
    ):
        raise ValueError("delta_kappa must be a positive whole number of mode spacings")
    lo, hi = target_mode - d_modes, target_mode + d_modes
    if lo < 1 or hi > n_x // 2:
        raise ValueError(
            f"modes {lo} and {hi} around the target are not both representable on n_x = {n_x}"
        )
    cfg = AdrConfig(n_x=n_x, tau=tau, dt=dt, probe=probe, amplitude=amplitude)
    kp_lo = adr_kprime_at_mode(scheme, time, cfg, lo)
    kp_hi = adr_kprime_at_mode(scheme, time, cfg, hi)
    if not (np.isfinite(kp_lo) and np.isfinite(kp_hi)):
        raise MeasurementError("a probe mode was annihilated; cannot form the slope")
    return float((kp_hi.real - kp_lo.real) / ((hi - lo) * mode_spacing))


def _parabolic_offset(ym: float, y0: float, yp: float) -> float:
    """Vertex offset in [-1, 1] of the parabola through (-1,ym),(0,y0),(1,yp)."""
    denom = ym - 2.0 * y0 + yp
    if denom == 0.0:
        return 0.0
    return float(np.clip(0.5 * (ym - yp) / denom, -1.0, 1.0))


def _circular_shift_cells(reference: np.ndarray, shifted: np.ndarray) -> float:
    """Rightward shift (in cells) between two periodic signals.

    The estimate is the location of the peak of the circular cross-correlation
    band-limited to the reference's dominant nonzero harmonic; that peak sits
    at (cross-spectrum phase)/(harmonic frequency) exactly.  Using the single
    dominant harmonic makes the estimate exact for rigid translations: the
    full-band correlation peak is biased by the envelope's aliased harmonic
    tail.  The result is the representative nearest zero, so signals must be
    compared at close enough times that the true shift stays under a quarter
    period of the dominant harmonic.
    """
    n = reference.size
    f0 = np.fft.fft(reference)
    f1 = np.fft.fft(shifted)
    m = 1 + int(np.argmax(np.abs(f0[1 : (n + 1) // 2])))
    if abs(f0[m]) == 0.0 or abs(f1[m]) == 0.0:
        raise MeasurementError("signal has no harmonic content; shift is undefined")
    # rightward shift by s multiplies bin m by exp(-2*pi*i*m*s/n)
    dphi = float(np.angle(f1[m] * np.conj(f0[m])))
    return -dphi * n / (2.0 * np.pi * m)


def measure_group_velocity_envelope(history: WaveHistory, t_a: float, t_b: float) -> float:
    """Envelope displacement rate between two stored times.

    Envelopes of all snapshots in [t_a, t_b] are cross-correlated pairwise
    in sequence and the per-interval shifts summed, so the total shift is
    unwrapped through the history rather than read modulo the envelope
    period from the endpoints alone.
    """
    if not t_b > t_a:
        raise ValueError("need t_b > t_a")
    ia = history.index_of_time(t_a)
    ib = history.index_of_time(t_b)
    frames = history.u[ia : ib + 1]
    if len(frames) < 2:
        raise ValueError("history holds no interval between the requested times")
    envs = [hilbert_envelope(f) for f in frames]
    for e in envs:
        if e.max() - e.min() < 1e-12 * max(1.0, e.max()):
            raise MeasurementError("envelope is flat; group-velocity shift is undefined")
    total_cells = 0.0
    for e_prev, e_next in zip(envs[:-1], envs[1:]):
        total_cells += _circular_shift_cells(e_prev, e_next)
    return total_cells * history.dx / (t_b - t_a)


def _local_maxima(u: np.ndarray) -> np.ndarray:
    # strict rise on one side avoids double-counting flat-topped crests
    return np.flatnonzero((u > np.roll(u, 1)) & (u >= np.roll(u, -1)))


def _refine_crest(u: np.ndarray, j: int, x_lo: float, dx: float) -> float:
    n = u.size
    frac = _parabolic_offset(u[(j - 1) % n], u[j], u[(j + 1) % n])
    return x_lo + (j + frac) * dx


def measure_phase_velocity_peak(history: WaveHistory, t_a: float, t_b: float) -> float:
    """Displacement rate of one tracked wave crest between two stored times.

    The crest starts at the global maximum of the first frame and is
    followed snapshot to snapshot: in each frame the local maximum nearest
    the previous crest position (circularly) continues the track, with the
    sub-cell position from a parabolic fit.  Tracking refuses data where
    the crest assignment is ambiguous (snapshots too far apart) or where
    the field is flat.
    """
    if not t_b > t_a:
        raise ValueError("need t_b > t_a")
    ia = history.index_of_time(t_a)
    ib = history.index_of_time(t_b)
    frames = history.u[ia : ib + 1]
    if len(frames) < 2:
        raise ValueError("history holds no interval between the requested times")
    length = history.x.size * history.dx
    x_lo = float(history.x[0])

    first = frames[0]
    if first.max() - first.min() < 1e-12 * max(1.0, abs(first.max())):
        raise MeasurementError("field is flat; there is no crest to track")
    maxima = _local_maxima(first)
    if maxima.size == 0:
        raise MeasurementError("first frame has no local maximum")
    # half the closest crest spacing bounds an unambiguous per-interval move
    if maxima.size > 1:
        gaps = np.diff(np.sort(maxima)) * history.dx
        wrap = length - (np.sort(maxima)[-1] - np.sort(maxima)[0]) * history.dx
        max_jump = 0.5 * min(gaps.min(), wrap)
    else:
        max_jump = 0.5 * length
    j0 = int(maxima[int(np.argmax(first[maxima]))])
    x_prev = _refine_crest(first, j0, x_lo, history.dx)

    total = 0.0
    for frame in frames[1:]:
        cand = _local_maxima(frame)
        if cand.size == 0:
            raise MeasurementError("a frame lost all local maxima; cannot continue the track")
        pos = np.array([_refine_crest(frame, int(j), x_lo, history.dx) for j in cand])
        diffs = (pos - x_prev + length / 2) % length - length / 2
        best = int(np.argmin(np.abs(diffs)))
        if abs(diffs[best]) > max_jump:
            raise MeasurementError(
                "crest moved more than half a crest spacing between snapshots; "
                "store a denser history to keep the track unambiguous"
            )
        total += diffs[best]
        x_prev = pos[best]
    return total / (t_b - t_a)


def write_history(history: WaveHistory, out_dir: str | Path) -> None:
    """One CSV per snapshot (x,u[,p]) plus a manifest with the run context."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, t in enumerate(history.times):
        name = f"snap_t{t:.6f}.csv"
        names.append(name)
        cols = [history.x, history.u[i]] + ([history.p[i]] if history.p is not None else [])
        header = "x,u,p" if history.p is not None else "x,u"
        lines = [header]
        for row in zip(*cols):
            lines.append(",".join(fmt(v) for v in row))
        (out / name).write_text("\n".join(lines) + "\n")
    manifest = {
        "snapshots": names,
        "times": [float(t) for t in history.times],
        **history.meta,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_history(run_dir: str | Path) -> WaveHistory:
    """Rebuild a WaveHistory from a directory written by write_history."""
    run = Path(run_dir)
    manifest_path = run / "manifest.json"
    if not manifest_path.exists():
        raise ValueError(f"{run} has no manifest.json")
    manifest = json.loads(manifest_path.read_text())
    names = manifest.get("snapshots", [])
    times = np.asarray(manifest.get("times", []), dtype=float)
    if len(names) != times.size or not names:
        raise ValueError(f"{manifest_path} lists no usable snapshots")
    x = None
    us, ps = [], []
    has_p = False
    for name in names:
        rows = (run / name).read_text().strip().splitlines()
        header = rows[0].strip()
        if header not in ("x,u", "x,u,p"):
            raise ValueError(f"{run / name} has unexpected header {header!r}")
        has_p = header == "x,u,p"
        data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        if x is None:
            x = data[:, 0]
        us.append(data[:, 1])
        if has_p:
            ps.append(data[:, 2])
    meta = {k: v for k, v in manifest.items() if k not in ("snapshots", "times")}
    return WaveHistory(
        x=np.asarray(x),
        times=times,
        u=np.asarray(us),
        p=np.asarray(ps) if has_p else None,
        meta=meta,
    )
