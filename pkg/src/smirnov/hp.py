"""Radial H^p means M_p(r) = integral |f(r zeta)|^p dm and growth verdicts.

The verdict is a desk-scale heuristic, never a proof of membership.  Means
are taken at r = 0.9, 0.99, 0.999, 0.9999 with increments D_k between
consecutive radii.  Along this geometric sequence of 1 - r a bounded mean
has shrinking increments (q = D_3/D_2 < 1), a logarithmically growing mean
has q near 1 and a power-growing one q > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smirnov.boundary import grid_nodes

DEFAULT_RADII = (0.9, 0.99, 0.999, 0.9999)
R_LIMIT = 0.9999
P_MAX = 4.0
DIVERGENT_Q = 0.95
BOUNDED_Q = 0.9


def grid_size_for_radius(r, minimum=4096, per_width=128):
    """Power of two >= max(minimum, per_width/(1 - r)).

    The integrand varies on the scale 1 - r near a boundary singularity, so
    ``per_width`` points per width keep the trapezoid mean converged.
    """
    need = max(minimum, per_width / (1.0 - r))
    return 1 << math.ceil(math.log2(need))


def hp_mean(e, p, r, n=None):
    """Grid mean of |e(r zeta)|^p.

    ``e`` is any callable (a FunctionExpr, an inner/outer object, a lambda).
    Requires 0 < p <= 4 and 0 < r <= 0.9999.  Poles on the circle propagate
    as :class:`~smirnov.errors.PoleError`.
    """
    if not 0.0 < p <= P_MAX:
        raise ValueError(f"p must lie in (0, {P_MAX:g}]")
    if not 0.0 < r <= R_LIMIT:
        raise ValueError(f"r must lie in (0, {R_LIMIT}]")
    n = grid_size_for_radius(r) if n is None else n
    vals = np.asarray(e(r * grid_nodes(n)), dtype=np.complex128)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite values on the circle")
    return float(np.mean(np.abs(vals) ** p))


@dataclass(frozen=True)
class TrendReport:
    """Means at ``radii``, the increment ratio ``q`` and the verdict."""

    verdict: str
    p: float
    radii: tuple
    means: tuple
    q: float


def classify_trend(means, flat_tol=1e-12):
    """Verdict and q from means at four radii."""
    m = np.asarray(means, dtype=float)
    d = np.diff(m)
    if np.max(np.abs(d)) <= flat_tol * max(np.max(np.abs(m)), 1e-300):
        return "bounded", 0.0
    q = d[-1] / d[-2] if d[-2] != 0 else math.inf
    if np.all(d > 0) and q >= DIVERGENT_Q:
        return "divergent", float(q)
    if abs(q) <= BOUNDED_Q:
        return "bounded", float(q)
    return "inconclusive", float(q)


def membership_trend(e, p, radii=DEFAULT_RADII):
    """Heuristic H^p verdict: ``bounded``, ``divergent`` or ``inconclusive``."""
    if len(radii) < 4:
        raise ValueError("membership_trend needs at least four radii")
    means = tuple(hp_mean(e, p, r) for r in radii)
    verdict, q = classify_trend(means)
    return TrendReport(verdict, float(p), tuple(radii), means, q)
