"""Explicit time integrators for du/dt = f(u).

Euler, the three-stage strong-stability-preserving Runge-Kutta scheme in
convex-combination form, and classical RK4.  On a linear right-hand side
f(u) = lam*u one step multiplies the state by the truncated exponential
1 + z (+ z^2/2 + z^3/6 (+ z^4/24)) with z = lam*dt, which downstream
dispersion formulas rely on.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

TIME_KINDS = ("euler", "rk3", "rk4")

Rhs = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TimeSpec:
    kind: str
    dt: float

    def __post_init__(self):
        if self.kind not in TIME_KINDS:
            raise ValueError(f"unknown time integrator {self.kind!r}, expected one of {TIME_KINDS}")
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @property
    def label(self) -> str:
        return {"euler": "Euler", "rk3": "RK3", "rk4": "RK4"}[self.kind]


def amplification_polynomial(kind: str, z) -> np.ndarray | complex:
    """Linear one-step amplification factor at z = lam*dt."""
    z = np.asarray(z, dtype=complex)
    if kind == "euler":
        g = 1 + z
    elif kind == "rk3":
        g = 1 + z + z**2 / 2 + z**3 / 6
    elif kind == "rk4":
        g = 1 + z + z**2 / 2 + z**3 / 6 + z**4 / 24
    else:
        raise ValueError(f"unknown time integrator {kind!r}")
    return g if g.ndim else complex(g)


def step(state: np.ndarray, rhs: Rhs, spec: TimeSpec) -> np.ndarray:
    """Advance one step; the input state is not modified."""
    u = np.asarray(state)
    dt = spec.dt
    if spec.kind == "euler":
        return u + dt * rhs(u)
    if spec.kind == "rk3":
        u1 = u + dt * rhs(u)
        u2 = 0.75 * u + 0.25 * u1 + 0.25 * dt * rhs(u1)
        return u / 3 + 2 / 3 * u2 + 2 / 3 * dt * rhs(u2)
    k1 = rhs(u)
    k2 = rhs(u + 0.5 * dt * k1)
    k3 = rhs(u + 0.5 * dt * k2)
    k4 = rhs(u + dt * k3)
    return u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def advance(
    state: np.ndarray,
    rhs: Rhs,
    spec: TimeSpec,
    n_steps: int,
    stride: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """March n_steps and return (times, states).

    states[k] is the solution after times[k]/dt steps; the initial state and
    the final state are always stored, intermediate ones every `stride`
    steps (stride=None stores only the endpoints).
    """
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if stride is not None and stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    u = np.array(state, copy=True)
    times = [0.0]
    states = [u.copy()]
    for k in range(1, n_steps + 1):
        u = step(u, rhs, spec)
        if k == n_steps or (stride is not None and k % stride == 0):
            times.append(k * spec.dt)
            states.append(u.copy())
    return np.asarray(times), np.asarray(states)
