"""Structural decompositions of real Smirnov functions f = I F (I inner, F
outer, real boundary values): the Helson quotient representation, the Koebe
inner factorization f = K(I) R, the sum of two squares for nonnegative f,
and the level-set expansion of a bounded integer boundary argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from smirnov.boundary import BoundaryGrid, grid_nodes, winding_number
from smirnov.cayley import ArcSet, cayley_eval
from smirnov.config import R_MAX
from smirnov.disk import apply_K, constant, inner_leaf, outer_leaf, product
from smirnov.errors import (
    NegativityError,
    NonIntegerError,
    NonRealBoundaryError,
    NotRationalError,
    PoleError,
)
from smirnov.inner import InnerFunction, _cancel_common, _roots, _trim, inner_eval
from smirnov.outer import (
    constant_outer,
    outer_eval,
    outer_from_factors,
    outer_multiply,
    outer_scale,
    outer_sqrt,
)


@dataclass(frozen=True, eq=False)
class RealSmirnovFn:
    """f = I F with inner ``inner`` and outer ``outer``.

    ``rational`` optionally holds increasing-degree coefficient arrays
    ``(num, den)`` with f = num/den (needed by :func:`helson_decompose`).
    ``inner = outer = None`` encodes the zero function.
    """

    inner: InnerFunction | None
    outer: object | None
    rational: tuple | None = None

    @classmethod
    def zero(cls):
        return cls(None, None, (np.array([0j]), np.array([1.0 + 0j])))

    @property
    def is_zero(self):
        return self.outer is None

    @property
    def expr(self):
        """The composite :class:`~smirnov.disk.FunctionExpr` I * F."""
        if self.is_zero:
            return constant(0.0)
        return product(inner_leaf(self.inner), outer_leaf(self.outer))

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=np.complex128)) if np.ndim(z) else 0j
        return inner_eval(self.inner, z) * outer_eval(self.outer, z)

    def boundary_values(self, n=4096):
        """Values on the grid nodes (NaN where singular).

        Exact outer data are evaluated on the circle itself; quadrature-only
        data at radius r_max.
        """
        r = 1.0 if self.is_zero or getattr(self.outer, "has_closed_form", False) else R_MAX
        return safe_eval(self, r * grid_nodes(n))


def safe_eval(fn, z):
    """Vectorized evaluation that degrades to NaN at individual singular points."""
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(fn(z), dtype=np.complex128)
        if np.all(np.isfinite(out)):
            return out
    except (PoleError, ZeroDivisionError):
        pass
    out = np.empty(np.shape(z), dtype=np.complex128)
    for i, w in enumerate(np.ravel(z)):
        try:
            with np.errstate(all="ignore"):
                v = complex(fn(w))
        except (PoleError, ZeroDivisionError):
            v = complex("nan")
        out.flat[i] = v if np.isfinite(v) else complex("nan")
    return out


# ---------------------------------------------------------------------------
# Helson representation


@dataclass(frozen=True)
class HelsonPair:
    """Inner functions with (f - i)/(f + i) = psi2/psi1, f = i(psi1 + psi2)/(psi1 - psi2)."""

    psi1: InnerFunction
    psi2: InnerFunction
    merged_zeros: tuple = ()

    def reconstruct(self, z):
        a, b = inner_eval(self.psi1, z), inner_eval(self.psi2, z)
        return 1j * (a + b) / (a - b)

    def difference_winding(self, radii=(0.5, 0.9), n=4096):
        """Winding numbers of psi1 - psi2 on the given circles (0 means zero-free)."""
        fn = lambda z: inner_eval(self.psi1, z) - inner_eval(self.psi2, z)
        return tuple(winding_number(fn, r, n) for r in radii)


def _blaschke_from_roots(roots):
    inside = [complex(r) for r in roots if abs(r) < 1.0]
    power = sum(1 for r in inside if abs(r) < 1e-12)
    return InnerFunction(1.0, power, tuple((r, 1) for r in inside if abs(r) >= 1e-12))


def helson_decompose(f, probes=256, sep=1e-8):
    """Helson pair of a rational real Smirnov function.

    With f = P/Q, (f - i)/(f + i) = (P - iQ)/(P + iQ); psi2 collects the
    zeros of P - iQ in the disk (with the unimodular constant), psi1 those
    of P + iQ (constant 1).  Zeros of the two closer than ``sep`` are
    cancelled and listed in ``merged_zeros``.
    """
    if f.rational is None:
        raise NotRationalError("helson_decompose needs rational data (num, den)")
    num, den = (_trim(c) for c in f.rational)
    zeta = grid_nodes(probes)
    with np.errstate(all="ignore"):
        bvals = P.polyval(zeta, num) / P.polyval(zeta, den)
    fin = np.isfinite(bvals)
    if np.any(np.abs(bvals[fin].imag) > 1e-8 * np.maximum(1.0, np.abs(bvals[fin]))):
        raise NonRealBoundaryError("f is not real on the circle")
    pn = P.polysub(num, 1j * den)
    pd = P.polyadd(num, 1j * den)
    if np.max(np.abs(pn)) == 0 or np.max(np.abs(pd)) == 0:
        raise NonRealBoundaryError("f is identically +-i, not real")
    rn, rd = _roots(_trim(pn)), _roots(_trim(pd))
    rn_c, rd_c = _cancel_common(rn, rd, sep)
    merged = tuple(complex(r) for r in rn if all(abs(r - s) > 0 for s in rn_c) and abs(r) < 1.0)
    psi1 = _blaschke_from_roots(rd_c)
    shape2 = _blaschke_from_roots(rn_c)
    probe = 0.21 + 0.13j
    g = complex(P.polyval(probe, pn) / P.polyval(probe, pd))
    lam = g * inner_eval(psi1, probe) / inner_eval(shape2, probe)
    psi2 = shape2.scaled(lam / abs(lam))
    return HelsonPair(psi1, psi2, merged)


# ---------------------------------------------------------------------------
# Koebe factorization and sum of squares


def koebe_factor(f):
    """Split f = K(I_f) * R_f with K the Koebe map and R_f = -(1/4)(1 - I_f)^2 F.

    The unimodular constant is taken as given by I_f.  A constant inner
    factor xi is replaced by I_f = i and F by -i xi F, so that K(i) = 2 and
    R_f = f/2.  Returns ``(K_part, R_part)``: a FunctionExpr and a
    :class:`RealSmirnovFn` with trivial inner factor.
    """
    I, F = f.inner, f.outer
    if I.is_constant:
        F = outer_scale(F, -1j * I.xi)
        I = InnerFunction.constant(1j)
        R = outer_scale(F, 0.5j)
    else:
        sq = outer_from_factors([(I, 1.0, 2.0)], n=F.n_samples)
        R = outer_scale(outer_multiply(F, sq), -0.25)
    return apply_K(inner_leaf(I)), RealSmirnovFn(InnerFunction.constant(1.0), R)


def _one_plus(I, sign, n):
    """Outer 1 + sign*I as analytic data, or None when it vanishes identically."""
    phi = I.scaled(-sign)
    if phi.is_constant:
        c = 1.0 - phi.xi
        return None if abs(c) < 1e-15 else constant_outer(c, n)
    return outer_from_factors([(phi, 1.0, 1.0)], n=n)


def check_nonnegative(f, n=4096, tol=1e-9, imag_tol=1e-6):
    """Raise :class:`NegativityError` unless f >= 0 on the boundary grid."""
    vals = f.boundary_values(n)
    vals = vals[np.isfinite(vals)]
    mag = np.maximum(np.abs(vals), 1e-300)
    if np.any(np.abs(vals.imag) > imag_tol * mag + 1e-12):
        raise NegativityError("boundary values are not real")
    if np.any(vals.real < -tol * np.maximum(1.0, mag)):
        raise NegativityError(f"negative boundary value {vals.real.min():.6g}")


def sum_of_squares(f, n=None, check=True):
    """Functions g1, g2 real on the circle with f = g1^2 + g2^2 (f >= 0 there).

    g1 = (1 + I_f) sqrt(F) / 2 and g2 = (i/2)(1 - I_f) sqrt(F); a factor
    that vanishes identically gives the zero function.
    """
    n = f.outer.n_samples if n is None else n
    if check:
        check_nonnegative(f, n)
    root = outer_sqrt(f.outer)
    out = []
    for sign, c in ((+1, 0.5), (-1, 0.5j)):
        fac = _one_plus(f.inner, sign, root.n_samples)
        if fac is None:
            out.append(RealSmirnovFn.zero())
        else:
            out.append(RealSmirnovFn(InnerFunction.constant(1.0), outer_scale(outer_multiply(root, fac), c)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Level sets of a bounded integer argument


def integer_values(v, tol=1e-9):
    vals = v.real_values() if isinstance(v, BoundaryGrid) else np.asarray(v, dtype=float)
    r = np.rint(vals)
    if np.any(np.abs(vals - r) > tol):
        raise NonIntegerError("samples are not integers")
    return r.astype(np.int64)


def bounded_arg_expand(v):
    """Level sets E_n = {v >= n}, n = 1..max v, of a nonnegative integer grid.

    Grid values are read cellwise (cell j = [theta_j, theta_{j+1})), so the
    sets are unions of cells.  Then prod_n f_{E_n} = exp(pi(-conj v + i v)).
    """
    k = integer_values(v)
    if np.any(k < 0):
        raise NonIntegerError("bounded_arg_expand needs nonnegative values")
    return [ArcSet.from_cells(k >= level) for level in range(1, int(k.max(initial=0)) + 1)]


def level_product(levels, z):
    """prod over the arc sets of f_E(z)."""
    out = np.ones(np.shape(z), dtype=np.complex128)
    for E in levels:
        out = out * cayley_eval(E, z)
    return out if np.ndim(z) else complex(out)
