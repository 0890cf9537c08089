"""Spatial derivative operators on uniform periodic grids.

Three first-derivative approximations for advection with positive transport
speed, all with the same six-point footprint (offsets -3 .. +2):

* UPW5: the linear fifth-order upwind-biased stencil.
* WENO5-JS: fifth-order WENO in conservative flux-difference form with the
  classic smoothness-indicator weights.
* WENO5-M: the same reconstruction with mapped weights, which restores the
  ideal weights faster on smooth data.

UPW5 is exactly the optimal-weight limit of the two WENO variants, so the
three schemes share one dispersion baseline.  The module also provides the
analytic modified wavenumber of any linear stencil and the per-point frozen
(equivalent linear) coefficients of the nonlinear operators, which other
modules use to project a nonlinear scheme onto a single Fourier mode.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: ideal (optimal) reconstruction weights of the three WENO5 sub-stencils
IDEAL_WEIGHTS = (0.1, 0.6, 0.3)

SCHEME_KINDS = ("upw5", "weno5js", "weno5m", "linear")

_MOMENT_TOL = 1e-12


@dataclass(frozen=True)
class LinearStencil:
    """Constant-coefficient first-derivative stencil sum_l a_l u_{j+l} / dx.

    Consistency requires sum(a) = 0 and sum(l * a_l) = 1; both are checked
    on construction.
    """

    offsets: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        off = np.asarray(self.offsets, dtype=int)
        a = np.asarray(self.coefficients, dtype=float)
        if off.ndim != 1 or a.shape != off.shape or off.size == 0:
            raise ValueError("offsets and coefficients must be matching 1D arrays")
        if len(np.unique(off)) != off.size:
            raise ValueError("stencil offsets must be distinct")
        if abs(a.sum()) > _MOMENT_TOL:
            raise ValueError(f"stencil does not annihilate constants: sum a = {a.sum():g}")
        if abs((off * a).sum() - 1.0) > _MOMENT_TOL:
            raise ValueError(
                f"stencil first moment must be 1, got {(off * a).sum():g}"
            )
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "coefficients", a)

    @property
    def span(self) -> int:
        return int(self.offsets.max() - self.offsets.min())


def upw5_stencil() -> LinearStencil:
    """Fifth-order upwind-biased stencil on offsets -3 .. +2."""
    return LinearStencil(
        offsets=np.arange(-3, 3),
        coefficients=np.array([-1 / 30, 1 / 4, -1.0, 1 / 3, 1 / 2, -1 / 20]),
    )


@dataclass(frozen=True)
class SchemeSpec:
    """Selector for one spatial scheme plus its parameters.

    kind is one of 'upw5', 'weno5js', 'weno5m', or 'linear'; a 'linear'
    scheme carries its own stencil.  epsilon is the WENO regularization.
    """

    kind: str
    epsilon: float = 1e-6
    stencil: LinearStencil | None = field(default=None)

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}, expected one of {SCHEME_KINDS}")
        if self.kind in ("weno5js", "weno5m") and not self.epsilon > 0.0:
            raise ValueError(f"WENO epsilon must be positive, got {self.epsilon}")
        if self.kind == "linear" and self.stencil is None:
            raise ValueError("kind='linear' requires an explicit stencil")

    @property
    def is_linear(self) -> bool:
        return self.kind in ("upw5", "linear")

    @property
    def linear_stencil(self) -> LinearStencil:
        if self.kind == "upw5":
            return upw5_stencil()
        if self.kind == "linear":
            assert self.stencil is not None
            return self.stencil
        raise ValueError(f"scheme {self.kind!r} has no constant-coefficient stencil")

    @property
    def label(self) -> str:
        return {
            "upw5": "UPW5",
            "weno5js": "WENO5-JS",
            "weno5m": "WENO5-M",
            "linear": "linear",
        }[self.kind]


def apply_linear(field: np.ndarray, stencil: LinearStencil, dx: float) -> np.ndarray:
    """Apply a linear stencil to a periodic field: (1/dx) sum_l a_l u_{j+l}."""
    u = np.asarray(field)
    if u.ndim != 1:
        raise ValueError(f"field must be 1D, got shape {u.shape}")
    if u.size <= stencil.span:
        raise ValueError(
            f"grid of {u.size} points is too small for a stencil spanning {stencil.span}"
        )
    if not dx > 0.0:
        raise ValueError(f"dx must be positive, got {dx}")
    out = np.zeros_like(u, dtype=u.dtype if np.iscomplexobj(u) else float)
    for l, a in zip(stencil.offsets, stencil.coefficients):
        out += a * np.roll(u, -l)
    return out / dx


def modified_wavenumber_linear(stencil: LinearStencil, kappa) -> np.ndarray | complex:
    """Exact modified wavenumber of a linear stencil.

    kprime(kappa) = -i * sum_l a_l exp(i*l*kappa).  Real part: dispersion;
    imaginary part: dissipation (negative for stable upwinding).
    """
    kap = np.asarray(kappa, dtype=float)
    phases = np.exp(1j * np.multiply.outer(kap, stencil.offsets.astype(float)))
    kp = -1j * phases @ stencil.coefficients
    return kp if kap.ndim else complex(kp)


def _smoothness_indicators(u: np.ndarray):
    """Jiang-Shu smoothness indicators at every interface j+1/2 (index j)."""
    um2 = np.roll(u, 2)
    um1 = np.roll(u, 1)
    up1 = np.roll(u, -1)
    up2 = np.roll(u, -2)
    b0 = 13 / 12 * (um2 - 2 * um1 + u) ** 2 + 0.25 * (um2 - 4 * um1 + 3 * u) ** 2
    b1 = 13 / 12 * (um1 - 2 * u + up1) ** 2 + 0.25 * (um1 - up1) ** 2
    b2 = 13 / 12 * (u - 2 * up1 + up2) ** 2 + 0.25 * (3 * u - 4 * up1 + up2) ** 2
    return b0, b1, b2


def _js_weights_from_indicators(b0, b1, b2, epsilon: float):
    d0, d1, d2 = IDEAL_WEIGHTS
    a0 = d0 / (epsilon + b0) ** 2
    a1 = d1 / (epsilon + b1) ** 2
    a2 = d2 / (epsilon + b2) ** 2
    s = a0 + a1 + a2
    return a0 / s, a1 / s, a2 / s


def _henrick_map(w, d):
    """Weight map with fixed point at the ideal weight d, flat nearby."""
    return w * (d + d * d - 3 * d * w + w * w) / (d * d + w * (1 - 2 * d))


def _interface_weights(u: np.ndarray, epsilon: float, mapped: bool):
    w0, w1, w2 = _js_weights_from_indicators(*_smoothness_indicators(u), epsilon)
    if mapped:
        d0, d1, d2 = IDEAL_WEIGHTS
        g0 = _henrick_map(w0, d0)
        g1 = _henrick_map(w1, d1)
        g2 = _henrick_map(w2, d2)
        s = g0 + g1 + g2
        w0, w1, w2 = g0 / s, g1 / s, g2 / s
    return w0, w1, w2


def _interface_point_coeffs(w0, w1, w2):
    """Coefficients of the weighted reconstruction at interface j+1/2 on the
    point values u_{j-2} .. u_{j+2} (offsets -2 .. +2 relative to j)."""
    return (
        w0 / 3,
        -(7 * w0 + w1) / 6,
        (11 * w0 + 5 * w1 + 2 * w2) / 6,
        (2 * w1 + 5 * w2) / 6,
        -w2 / 6,
    )


def _weno5_interface_values(u: np.ndarray, epsilon: float, mapped: bool) -> np.ndarray:
    c = _interface_point_coeffs(*_interface_weights(u, epsilon, mapped))
    h = np.zeros_like(u, dtype=float)
    for m, cm in zip(range(-2, 3), c):
        h += cm * np.roll(u, -m)
    return h


def _check_weno_args(u: np.ndarray, c: float, dx: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 1:
        raise ValueError(f"field must be 1D, got shape {u.shape}")
    if u.size < 6:
        raise ValueError(f"WENO5 needs at least 6 points, got {u.size}")
    if not c > 0.0:
        raise ValueError(f"only positive transport speed is supported, got c = {c}")
    if not dx > 0.0:
        raise ValueError(f"dx must be positive, got {dx}")
    return u


def weno5_js_derivative(field: np.ndarray, c: float, dx: float, epsilon: float = 1e-6) -> np.ndarray:
    """WENO5-JS approximation of du/dx in flux-difference form.

    c only fixes the upwind direction (the transport speed itself is applied
    by the caller); the flux is f = u reconstructed at interfaces from the
    left, and the derivative is (h_{j+1/2} - h_{j-1/2}) / dx, so the sum of
    the output over a period telescopes to zero.
    """
    u = _check_weno_args(field, c, dx)
    h = _weno5_interface_values(u, epsilon, mapped=False)
    return (h - np.roll(h, 1)) / dx


def weno5_m_derivative(field: np.ndarray, c: float, dx: float, epsilon: float = 1e-6) -> np.ndarray:
    """WENO5 derivative with mapped weights; same contract as the JS form."""
    u = _check_weno_args(field, c, dx)
    h = _weno5_interface_values(u, epsilon, mapped=True)
    return (h - np.roll(h, 1)) / dx


@dataclass(frozen=True)
class FrozenStencilField:
    """Equivalent linear stencil of a (possibly nonlinear) scheme.

    One coefficient row per grid point: applying it reproduces the operator
    output on the field it was frozen from, but as an explicitly linear
    operator it can also be projected mode by mode.
    """

    offsets: np.ndarray
    coefficients: np.ndarray  # shape (n_x, len(offsets))

    def __post_init__(self):
        off = np.asarray(self.offsets, dtype=int)
        b = np.asarray(self.coefficients, dtype=float)
        if b.ndim != 2 or b.shape[1] != off.size:
            raise ValueError("coefficients must have shape (n_x, len(offsets))")
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "coefficients", b)

    @property
    def n_x(self) -> int:
        return int(self.coefficients.shape[0])

    def apply(self, field: np.ndarray, dx: float) -> np.ndarray:
        """(1/dx) sum_l b[j, l] u_{j+l}; pass dx = 1 for the bare weighted sum."""
        u = np.asarray(field)
        if u.shape != (self.n_x,):
            raise ValueError(f"field shape {u.shape} does not match frozen grid ({self.n_x},)")
        out = np.zeros(self.n_x, dtype=complex if np.iscomplexobj(u) else float)
        for i, l in enumerate(self.offsets):
            out += self.coefficients[:, i] * np.roll(u, -l)
        return out / dx


def frozen_coefficients(spec: SchemeSpec, field: np.ndarray) -> FrozenStencilField:
    """Freeze a scheme's effective per-point stencil on the given real field.

    Linear schemes tile their constant stencil.  For WENO the nonlinear
    weights are evaluated once at every interface and folded into the
    flux difference, giving offsets -3 .. +2 per point.
    """
    u = np.asarray(field, dtype=float)
    if u.ndim != 1:
        raise ValueError(f"field must be 1D, got shape {u.shape}")
    n = u.size
    if spec.is_linear:
        st = spec.linear_stencil
        if n <= st.span:
            raise ValueError(f"grid of {n} points too small for stencil span {st.span}")
        return FrozenStencilField(
            offsets=st.offsets.copy(),
            coefficients=np.tile(st.coefficients, (n, 1)),
        )
    if n < 6:
        raise ValueError(f"WENO5 needs at least 6 points, got {n}")
    w = _interface_weights(u, spec.epsilon, mapped=(spec.kind == "weno5m"))
    cm = _interface_point_coeffs(*w)  # offsets -2 .. +2 at interface j+1/2
    offsets = np.arange(-3, 3)
    b = np.zeros((n, offsets.size))
    for i, l in enumerate(offsets):
        plus = cm[l + 2] if -2 <= l <= 2 else 0.0
        minus = np.roll(cm[l + 3], 1) if -2 <= l + 1 <= 2 else 0.0
        b[:, i] = plus - minus
    return FrozenStencilField(offsets=offsets, coefficients=b)


def derivative(field: np.ndarray, spec: SchemeSpec, dx: float, c: float = 1.0) -> np.ndarray:
    """du/dx under the selected scheme (transport speed applied by caller)."""
    if spec.kind == "weno5js":
        return weno5_js_derivative(field, c, dx, spec.epsilon)
    if spec.kind == "weno5m":
        return weno5_m_derivative(field, c, dx, spec.epsilon)
    return apply_linear(field, spec.linear_stencil, dx)
