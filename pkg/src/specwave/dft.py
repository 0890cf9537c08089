"""Discrete Fourier transform with the 1/N forward normalization.

The forward transform carries the 1/N factor and the inverse carries none:

    coef[n] = (1/N) * sum_j v[j] * exp(-i*j*kappa_n),   kappa_n = 2*pi*n/N,
    v[j]    =         sum_n coef[n] * exp(+i*j*kappa_n).

With this convention the coefficient of a unit-amplitude probe mode is 1,
which keeps amplitude-ratio diagnostics free of grid-size factors.  The
analytic-signal envelope is built on the same transform pair.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Spectrum:
    """DFT coefficients of one periodic sample sequence.

    ``coefficients[n]`` multiplies exp(+i*j*kappa_n) in the inverse
    transform; the index runs over n = 0 .. N-1 so conjugate modes of a real
    field live in the upper half of the array.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("Spectrum needs a 1D coefficient array of length >= 2")

    @property
    def n_x(self) -> int:
        return int(np.asarray(self.coefficients).shape[0])


def dft(field: np.ndarray) -> Spectrum:
    """Forward transform of a periodic sample sequence (real or complex)."""
    v = np.asarray(field)
    if v.ndim != 1:
        raise ValueError(f"field must be 1D, got shape {v.shape}")
    if v.size < 2:
        raise ValueError(f"field needs at least 2 samples, got {v.size}")
    return Spectrum(np.fft.fft(v) / v.size)


def idft(spectrum: Spectrum) -> np.ndarray:
    """Inverse transform; exact round trip with dft up to rounding."""
    c = np.asarray(spectrum.coefficients)
    return np.fft.ifft(c) * c.size


def hilbert_envelope(field: np.ndarray) -> np.ndarray:
    """Magnitude of the analytic signal of a real periodic sequence.

    The analytic signal keeps mode 0 and the Nyquist mode with weight 1,
    doubles modes 1 .. N/2-1, and zeroes the rest; the envelope is its
    pointwise magnitude.  Requires an even number of real samples so the
    Nyquist mode is unambiguous.
    """
    v = np.asarray(field)
    if np.iscomplexobj(v):
        raise ValueError("hilbert_envelope expects a real field")
    if v.ndim != 1 or v.size < 2:
        raise ValueError(f"field must be 1D with >= 2 samples, got shape {v.shape}")
    n = v.size
    if n % 2 != 0:
        raise ValueError(f"hilbert_envelope needs an even sample count, got {n}")
    weights = np.zeros(n)
    weights[0] = 1.0
    weights[1 : n // 2] = 2.0
    weights[n // 2] = 1.0
    analytic = idft(Spectrum(dft(v).coefficients * weights))
    return np.abs(analytic)
