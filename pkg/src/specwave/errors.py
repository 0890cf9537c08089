"""Exception types that map onto the CLI exit-code contract.

Invalid inputs raise plain ValueError.  StabilityError marks refusals to run
an unstable or numerically untrustworthy configuration (exit code 2), and
MeasurementError marks measurements that are undefined on the given data
(also exit code 2, since the run itself is unusable).  Reproduction failures
against pinned reference values are signaled by ReproductionError (exit 3).
"""
from __future__ import annotations


class StabilityError(RuntimeError):
    """Configuration refused on stability grounds (e.g. CFL number > 1)."""

    def __init__(self, message: str, sigma: float | None = None):
        super().__init__(message)
        self.sigma = sigma


class MeasurementError(RuntimeError):
    """Measurement undefined on the supplied data (flat field, lost mode, ...)."""


class ReproductionError(RuntimeError):
    """A reproduction target missed its pinned tolerance."""
