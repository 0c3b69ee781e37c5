"""Numerical constants and runtime switches shared by all modules."""

import contextlib
import contextvars
import os

#: Chordal distance below which a point counts as sitting on a pole.
TAU_POLE = 1e-9

#: Largest radius at which sampled-grid kernel quadrature is trusted.
R_MAX = 0.999

#: Tolerance for boundary unimodularity checks of inner functions.
UNIMODULAR_TOL = 1e-8

_DEFAULT_GRID_N = 4096

_extended = contextvars.ContextVar("smirnov_extended_precision", default=False)


def default_grid_n():
    """Default boundary grid size; ``SMIRNOV_GRID_N`` overrides it."""
    raw = os.environ.get("SMIRNOV_GRID_N")
    if not raw:
        return _DEFAULT_GRID_N
    n = int(raw)
    if n < 64 or n & (n - 1):
        raise ValueError(f"SMIRNOV_GRID_N must be a power of two >= 64, got {n}")
    return n


def extended_precision_enabled():
    return _extended.get()


@contextlib.contextmanager
def extended_precision(enabled=True):
    """Evaluate long products through exactly rounded log sums.

    Affects Blaschke products and truncated infinite products inside the
    ``with`` block (context-local, so threads do not interfere).
    """
    token = _extended.set(bool(enabled))
    try:
        yield
    finally:
        _extended.reset(token)
