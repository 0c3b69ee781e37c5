"""Truncated A-integrals of weak-L^1 boundary data.

For h with t lambda_h(t) -> 0 the A-integral is lim_{A->inf} of the
integral of h over {|h| <= A}.  The Herglotz A-integral instead clamps
v to [-A, A] and integrates i (zeta + z)/(zeta - z) v_A dm; it represents
h = u + iv with u(0) = 0 when h lies in the weak Hardy class.  The two
truncations differ at finite A and are kept as separate operations.
(The Cauchy-kernel analogue is not provided separately; it is the analytic
part of the same computation.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smirnov.boundary import BoundaryGrid, distribution, empirical_sigma, herglotz_extend, weak_decay_test
from smirnov.errors import NotWeakL1Error

CERTIFICATE_SLACK = 1e-8
# |h| <= A is tested as |h| <= A (1 + LEVEL_RTOL) so that samples equal to A
# up to rounding (e.g. |zeta_j| = 1 + 1 ulp) fall inside the truncation
LEVEL_RTOL = 1e-12


@dataclass(frozen=True)
class TruncationLadder:
    """Strictly increasing positive truncation levels A_0 < A_1 < ..."""

    values: tuple = tuple(2.0**k for k in range(15))

    def __post_init__(self):
        v = tuple(float(a) for a in self.values)
        if not v or v[0] <= 0 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("ladder levels must be positive and strictly increasing")
        object.__setattr__(self, "values", v)

    @classmethod
    def dyadic(cls, k_min=0, k_max=14):
        return cls(tuple(2.0**k for k in range(k_min, k_max + 1)))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def _grid(h):
    return h if isinstance(h, BoundaryGrid) else BoundaryGrid(np.asarray(h))


def _limit_error(trace):
    inc = np.abs(np.diff(trace, axis=0))
    if inc.shape[0] == 0:
        return 0.0, inc
    return float(np.max(inc[-3:])), inc


@dataclass(frozen=True)
class AIntegralResult:
    """Last-rung value with error bar max(last three increments) and the trace."""

    value: complex
    error: float
    ladder: tuple
    trace: np.ndarray
    membership: str


def a_integral(h, ladder=None):
    """Integrals of h over {|h| <= A} along the ladder.

    Raises :class:`NotWeakL1Error` when the distribution profile of h
    classifies it as outside the weak-L^1-decay class.
    """
    h = _grid(h)
    ladder = TruncationLadder() if ladder is None else ladder
    membership = weak_decay_test(distribution(h))
    if membership == "non-member":
        raise NotWeakL1Error("t * lambda_h(t) does not decay: the A-integral is undefined")
    vals, mag = h.values, np.abs(h.values)
    trace = np.array([np.mean(np.where(mag <= A * (1 + LEVEL_RTOL), vals, 0.0)) for A in ladder])
    err, _ = _limit_error(trace)
    return AIntegralResult(complex(trace[-1]), err, ladder.values, trace, membership)


@dataclass(frozen=True)
class HerglotzAResult:
    """i * Herglotz[v_A](z) + i v(0) per rung.

    ``error`` is the largest of the last three increments (pointwise max for
    array z); ``flagged`` is set when the increments are not shrinking.
    """

    value: object
    error: float
    ladder: tuple
    trace: np.ndarray
    increments: np.ndarray
    flagged: bool


def clamp(v, A):
    """v where |v| <= A, A where v > A and -A where v < -A."""
    return np.clip(v, -A, A)


def herglotz_a_integral(v, z, ladder=None):
    """Herglotz A-integral of the real boundary data v at z.

    The mean v(0) is removed before clamping and restored as the constant
    i v(0), so the result is the analytic h = -conj(v) + i v for bounded v.
    """
    v = _grid(v)
    ladder = TruncationLadder() if ladder is None else ladder
    w = v.real_values()
    v0 = float(w.mean())
    w = w - v0
    trace = np.array([1j * herglotz_extend(v.replace(clamp(w, A)), z) + 1j * v0 for A in ladder])
    err, inc = _limit_error(trace)
    tail = inc.reshape(inc.shape[0], -1).max(axis=1) if inc.size else inc
    scale = 1e-12 * (1.0 + float(np.max(np.abs(trace[-1]))))
    flagged = bool(tail.size >= 3 and tail[-1] > scale and not (tail[-1] < tail[-2] < tail[-3]))
    value = complex(trace[-1]) if np.ndim(z) == 0 else trace[-1]
    return HerglotzAResult(value, err, ladder.values, trace, tail, flagged)


@dataclass(frozen=True)
class HFS1Certificate:
    """|integral over {|h| <= A} of h| <= rho(A) + 2 sqrt(sigma(0) sigma(A)).

    ``sigma0`` is the empirical supremum of t lambda(t), a lower bound for
    the continuum quantity, so ``sigma_is_lower_bound`` is always set.
    """

    A: float
    lhs: float
    rhs: float
    rho_A: float
    sigma0: float
    sigma_A: float
    passed: bool
    sigma_is_lower_bound: bool = True


def hfs1_certificate(h, A, mean_tol=1e-6):
    """Check the truncated-integral bound for mean-zero analytic boundary data h.

    Raises ``ValueError`` if |mean(h)| exceeds ``mean_tol`` times the mean
    of |h| (the bound concerns h with h(0) = 0).
    """
    h = _grid(h)
    A = float(A)
    if A <= 0:
        raise ValueError("A must be positive")
    vals, mag = h.values, np.abs(h.values)
    scale = float(mag.mean())
    if abs(vals.mean()) > mean_tol * max(scale, 1e-300) and abs(vals.mean()) > 1e-14:
        raise ValueError(f"grid mean {abs(vals.mean()):.3g} is not ~0; the bound needs h(0) = 0")
    inside = mag <= A * (1 + LEVEL_RTOL)
    lhs = float(abs(np.mean(np.where(inside, vals, 0.0))))
    rho_A = A * float(np.mean(~inside))
    s0, sA = empirical_sigma(h, 0.0), empirical_sigma(h, A)
    rhs = rho_A + 2.0 * math.sqrt(s0 * sA)
    return HFS1Certificate(A, lhs, rhs, rho_A, s0, sA, lhs <= rhs + CERTIFICATE_SLACK)
