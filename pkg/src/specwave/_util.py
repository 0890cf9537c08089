"""Small shared helpers: number formatting and worker-count policy."""
from __future__ import annotations

import os

THREADS_ENV_VAR = "SPECWAVE_THREADS"


def fmt(x: float) -> str:
    """Format a float with 17 significant digits so it round-trips exactly."""
    return f"{x:.17g}"


def worker_count() -> int:
    """Worker cap from SPECWAVE_THREADS: unset -> 1, 0 -> all CPUs, n -> n."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ValueError(f"{THREADS_ENV_VAR} must be >= 0, got {n}")
    if n == 0:
        return os.cpu_count() or 1
    return n
