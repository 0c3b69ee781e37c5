"""Outer functions F(z) = e^{i gamma} exp( integral (zeta + z)/(zeta - z) w(zeta) dm ).

Every :class:`OuterFunction` carries its boundary log-modulus ``w`` on a grid,
which is all the general construction needs.  Two optional exact
representations take precedence when evaluating:

* an analytic form ``c e^{i gamma} prod_k (1 - a_k phi_k(z))^{s_k}`` with
  inner ``phi_k`` and ``0 < a_k <= 1``, normalized so that arg F(0) = gamma;
  it is exact on the closed disk;
* a boundary argument grid ``arg``: F = exp(mean(w) + i H[arg]) where H is
  the Herglotz integral.  With a step grid this is exact for all |z| < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smirnov.boundary import BoundaryGrid, conjugate, grid_nodes, herglotz_extend
from smirnov.config import TAU_POLE, default_grid_n
from smirnov.errors import PoleError
from smirnov.inner import InnerFunction, inner_eval


@dataclass(frozen=True)
class AnalyticFactor:
    """The factor (1 - a phi(z))^s with phi inner, 0 < a <= 1, real s."""

    inner: InnerFunction
    a: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.a <= 1.0:
            raise ValueError("factor parameter a must lie in (0, 1]")
        if self.inner.is_constant and self.a == 1.0 and abs(self.inner.xi - 1.0) < 1e-15:
            raise ValueError("1 - phi vanishes identically for phi = 1")


@dataclass(frozen=True, eq=False)
class OuterFunction:
    """Outer function data; see the module docstring for the three routes.

    Parameters
    ----------
    gamma : float
        Rotation constant, arg F(0).
    logmod : BoundaryGrid
        Real samples of w = log|F| on the circle.
    factors : tuple of AnalyticFactor or None
        Exact analytic form (``None`` when unavailable).
    scale : float
        Positive constant ``c`` of the analytic form.
    argument : BoundaryGrid or None
        Boundary argument of F, if known.
    """

    gamma: float
    logmod: BoundaryGrid
    factors: tuple | None = None
    scale: float = 1.0
    argument: BoundaryGrid | None = None

    def __post_init__(self):
        w = self.logmod.real_values()
        if not np.all(np.isfinite(w)):
            raise ValueError("log-modulus samples must be finite (regularize singular samples)")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def __call__(self, z):
        return outer_eval(self, z)

    def sqrt(self):
        return outer_sqrt(self)

    @property
    def n_samples(self):
        return self.logmod.n_samples

    @property
    def has_closed_form(self):
        return self.factors is not None

    def value_at_zero(self):
        return complex(outer_eval(self, 0.0))


# ---------------------------------------------------------------------------
# Construction


def _safe_inner_on_nodes(phi, zeta):
    """phi on the nodes; nodes within the pole tolerance of an atom give NaN."""
    vals = np.full(zeta.shape, np.nan + 0j)
    ok = np.ones(zeta.shape, dtype=bool)
    for at, _ in phi.atoms:
        ok &= np.abs(zeta - at) >= TAU_POLE
    vals[ok] = inner_eval(phi, zeta[ok])
    return vals


def log_abs_one_minus(phi, a=1.0, n=None):
    """Samples of log|1 - a phi(zeta_j)| with singular nodes regularized.

    A node where 1 - a phi vanishes (relative to its neighbours) gets the
    mean of the neighbouring logs minus log(2 pi); for log|1 - zeta| this is
    -log n, the value that makes the grid mean exact.  A node on an atom of
    phi, where phi spins through the whole circle, gets 0, the circular
    average of log|1 - e^{it}|.
    """
    n = default_grid_n() if n is None else n
    zeta = grid_nodes(n)
    mod = np.abs(1.0 - a * _safe_inner_on_nodes(phi, zeta))
    atom = np.isnan(mod)
    left, right = np.roll(mod, 1), np.roll(mod, -1)
    with np.errstate(invalid="ignore"):
        singular = ~atom & (mod < 1e-3 * np.fmin(left, right))
    with np.errstate(divide="ignore"):
        vals = np.log(mod)
    for j in np.nonzero(singular)[0]:
        nb = [x for x in (left[j], right[j]) if np.isfinite(x) and x > 0]
        vals[j] = np.mean(np.log(nb)) - math.log(2.0 * math.pi) if nb else 0.0
    vals[atom] = 0.0
    return vals


def outer_from_logmod(w, gamma=0.0):
    """General outer function from log-modulus grid data (Herglotz quadrature)."""
    if not isinstance(w, BoundaryGrid):
        w = BoundaryGrid(np.asarray(w, dtype=float))
    return OuterFunction(float(gamma), w)


def outer_from_factors(factors, scale=1.0, gamma=0.0, n=None):
    """Outer function c e^{i gamma} prod (1 - a phi)^s, normalized so arg F(0) = gamma.

    ``factors`` holds :class:`AnalyticFactor` objects or ``(phi, a, s)``
    tuples.  The log-modulus grid is sampled with
    :func:`log_abs_one_minus`.
    """
    n = default_grid_n() if n is None else n
    fs = tuple(f if isinstance(f, AnalyticFactor) else AnalyticFactor(*f) for f in factors)
    w = np.full(n, math.log(scale))
    for f in fs:
        w += f.s * log_abs_one_minus(f.inner, f.a, n)
    return OuterFunction(float(gamma), BoundaryGrid(w), fs, float(scale))


def constant_outer(c, n=None):
    """The constant function ``c`` (nonzero complex)."""
    c = complex(c)
    if c == 0:
        raise ValueError("outer functions are zero-free; constant must be nonzero")
    n = default_grid_n() if n is None else n
    return OuterFunction(math.atan2(c.imag, c.real), BoundaryGrid(np.full(n, math.log(abs(c)))), (), abs(c))


def outer_from_argument(arg, log_modulus_at_zero=0.0):
    """Outer function with boundary argument ``arg`` and |F(0)| = e^{log_modulus_at_zero}.

    F = exp(c + i H[arg]) with H the Herglotz integral, so
    log|F| = c - conj(arg) on the circle and arg F(0) = mean(arg).  Step
    grids (e.g. pi times an integer staircase) are handled exactly.
    """
    if not isinstance(arg, BoundaryGrid):
        arg = BoundaryGrid(np.asarray(arg, dtype=float))
    w = -conjugate(arg).values + log_modulus_at_zero
    return OuterFunction(float(arg.real_values().mean()), BoundaryGrid(w), None, 1.0, arg)


# ---------------------------------------------------------------------------
# Evaluation


def _analytic_log(F, zz):
    out = np.full(zz.shape, 1j * F.gamma + math.log(F.scale), dtype=np.complex128)
    for f in F.factors:
        base0 = 1.0 - f.a * f.inner.value_at_zero()
        base = 1.0 - f.a * inner_eval(f.inner, zz)
        if f.s < 0 and np.any(np.abs(base) < TAU_POLE):
            raise PoleError("outer factor (1 - a phi)^s with s < 0 evaluated where a phi = 1")
        with np.errstate(divide="ignore"):
            out += f.s * (np.log(base) - 1j * np.angle(base0))
    return out


def outer_eval(F, z):
    """Evaluate the outer function at ``z`` (scalar or array).

    Closed-form data are exact on the closed disk.  Argument data on a step
    grid are exact for |z| < 1; otherwise the sampled-grid quadrature applies
    and |z| <= r_max is required.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if F.factors is not None:
        if np.any(np.abs(zz) > 1.0 + 1e-12):
            raise ValueError("outer functions are evaluated on the closed unit disk only")
        val = np.exp(_analytic_log(F, zz))
    elif F.argument is not None:
        c0 = F.logmod.real_values().mean()
        val = np.exp(c0 + 1j * herglotz_extend(F.argument, zz))
    else:
        val = np.exp(1j * F.gamma + herglotz_extend(F.logmod, zz))
    return complex(val.ravel()[0]) if scalar else val.reshape(np.shape(z))


def outer_boundary(F):
    """Boundary function exp(w + i conj(w) + i gamma) on the grid (complex grid).

    When the boundary argument is stored it is used directly in place of
    conj(w) + gamma (the two agree exactly in the continuum).
    """
    w = F.logmod.real_values()
    if F.argument is not None:
        phase = F.argument.real_values()
    else:
        phase = conjugate(F.logmod).values + F.gamma
    return BoundaryGrid(np.exp(w + 1j * phase))


# ---------------------------------------------------------------------------
# Algebra


def _canonical_angle(g):
    """Shift by a multiple of 2 pi into (-pi, pi]; returns (angle, shift)."""
    k = math.ceil((g - math.pi) / (2.0 * math.pi))
    return g - 2.0 * math.pi * k, -2.0 * math.pi * k


def outer_sqrt(F):
    """Square root with gamma first brought into (-pi, pi], then halved."""
    g, shift = _canonical_angle(F.gamma)
    factors = None
    if F.factors is not None:
        factors = tuple(AnalyticFactor(f.inner, f.a, f.s / 2.0) for f in F.factors)
    arg = None
    if F.argument is not None:
        arg = F.argument.replace((F.argument.real_values() + shift) / 2.0)
    return OuterFunction(g / 2.0, F.logmod * 0.5, factors, math.sqrt(F.scale), arg)


def outer_multiply(F, G):
    """Pointwise product; exact forms survive only when both factors have them."""
    if F.n_samples != G.n_samples:
        raise ValueError("outer functions must share the grid size")
    factors = F.factors + G.factors if F.factors is not None and G.factors is not None else None
    arg = F.argument + G.argument if F.argument is not None and G.argument is not None else None
    w = BoundaryGrid(F.logmod.real_values() + G.logmod.real_values())
    return OuterFunction(F.gamma + G.gamma, w, factors, F.scale * G.scale, arg)


def outer_scale(F, c):
    """Multiply by the nonzero complex constant ``c``."""
    c = complex(c)
    if c == 0:
        raise ValueError("scale factor must be nonzero")
    lc, ac = math.log(abs(c)), math.atan2(c.imag, c.real)
    arg = F.argument.replace(F.argument.real_values() + ac) if F.argument is not None else None
    w = BoundaryGrid(F.logmod.real_values() + lc)
    return OuterFunction(F.gamma + ac, w, F.factors, F.scale * abs(c), arg)
