"""Cayley inner functions of finite arc unions.

For a set E on the circle, f_E = exp(i pi H[chi_E]) (H the Herglotz
integral) is analytic, zero-free, maps the disk into the upper half plane
and has boundary argument pi * chi_E.  For one arc [beta, alpha),

    f_E(z) = e^{-i(alpha - beta)/2} (e^{i alpha} - z)/(e^{i beta} - z),

and disjoint unions multiply.  Normalization: f_E(0) = e^{i pi m(E)}, with m
the normalized arc-length measure.  The inner counterpart is
phi_E = T^{-1}(f_E).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from smirnov.boundary import grid_nodes, level_set_measure
from smirnov.config import TAU_POLE
from smirnov.disk import mobius_T
from smirnov.errors import ArcMeasureError, PoleError
from smirnov.inner import InnerFunction, inner_eval, rational_inner_from_bounded

TWO_PI = 2.0 * math.pi
_EPS = 1e-14


class ClosedFormFallback(UserWarning):
    """phi_from_arcset used the rational route instead of the one-arc closed form."""


@dataclass(frozen=True)
class ArcSet:
    """Finite disjoint union of half-open arcs [beta, alpha) on the circle.

    ``intervals`` is the canonical form: sorted, disjoint, non-adjacent
    pieces of [0, 2 pi).  Use :meth:`from_arcs` to build from arbitrary
    (possibly overlapping or wrapping) ``(beta, alpha)`` pairs.
    """

    intervals: tuple = ()

    @classmethod
    def from_arcs(cls, arcs):
        pieces = []
        for beta, alpha in arcs:
            beta, alpha = float(beta), float(alpha)
            length = alpha - beta
            if length < 0:
                raise ValueError(f"arc ({beta}, {alpha}) has negative length")
            if length <= _EPS:
                continue
            if length >= TWO_PI - _EPS:
                return cls.full()
            b = beta % TWO_PI
            if TWO_PI - b <= _EPS:
                b = 0.0
            e = b + length
            if e <= TWO_PI + _EPS:
                pieces.append((b, min(e, TWO_PI)))
            else:
                pieces.append((b, TWO_PI))
                pieces.append((0.0, e - TWO_PI))
        return cls(_merge(pieces))

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def full(cls):
        return cls(((0.0, TWO_PI),))

    @classmethod
    def from_cells(cls, mask):
        """Union of grid cells [theta_j, theta_{j+1}) where ``mask`` is true."""
        mask = np.asarray(mask, dtype=bool)
        n = mask.size
        h = TWO_PI / n
        pieces = []
        j = 0
        while j < n:
            if mask[j]:
                k = j
                while k < n and mask[k]:
                    k += 1
                pieces.append((j * h, k * h if k < n else TWO_PI))
                j = k
            else:
                j += 1
        return cls(_merge(pieces))

    @property
    def is_empty(self):
        return not self.intervals

    @property
    def is_full(self):
        return len(self.intervals) == 1 and self.intervals[0][1] - self.intervals[0][0] >= TWO_PI - _EPS

    @property
    def measure(self):
        return sum(e - b for b, e in self.intervals) / TWO_PI

    @property
    def arcs(self):
        """Maximal arcs (beta, alpha); an arc through angle 0 has alpha > 2 pi."""
        iv = list(self.intervals)
        if self.is_full or len(iv) < 2:
            return tuple(iv)
        if iv[0][0] <= _EPS and iv[-1][1] >= TWO_PI - _EPS:
            first, last = iv.pop(0), iv.pop()
            iv.append((last[0], TWO_PI + first[1]))
        return tuple(iv)

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def contains(self, theta):
        t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        out = np.zeros(t.shape, dtype=bool)
        for b, e in self.intervals:
            out |= (t >= b) & (t < e)
        return out

    def union(self, other):
        return arcset_union(self, other)

    def intersect(self, other):
        return arcset_intersect(self, other)

    def complement(self):
        return arcset_complement(self)


def _merge(pieces):
    pieces = sorted((b, e) for b, e in pieces if e - b > _EPS)
    out = []
    for b, e in pieces:
        if out and b <= out[-1][1] + _EPS:
            out[-1] = (out[-1][0], max(out[-1][1], e))
        else:
            out.append((b, e))
    return tuple(out)


def arcset_union(E, F):
    return ArcSet(_merge(list(E.intervals) + list(F.intervals)))


def arcset_complement(E):
    out, pos = [], 0.0
    for b, e in E.intervals:
        if b > pos + _EPS:
            out.append((pos, b))
        pos = e
    if pos < TWO_PI - _EPS:
        out.append((pos, TWO_PI))
    return ArcSet(_merge(out))


def arcset_intersect(E, F):
    out = []
    i = j = 0
    a, b = E.intervals, F.intervals
    while i < len(a) and j < len(b):
        lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
        if hi - lo > _EPS:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return ArcSet(_merge(out))


# ---------------------------------------------------------------------------
# f_E and phi_E


def cayley_eval(E, z):
    """f_E(z) as the product of the one-arc closed forms (closed disk).

    Raises :class:`PoleError` at an arc endpoint.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(np.abs(zz) > 1.0 + 1e-12):
        raise ValueError("f_E is evaluated on the closed unit disk only")
    if E.is_full:
        out = np.full(zz.shape, -1.0 + 0j)
    else:
        out = np.ones(zz.shape, dtype=np.complex128)
        for beta, alpha in E.arcs:
            ea, eb = np.exp(1j * alpha), np.exp(1j * beta)
            for end in (ea, eb):
                if np.any(np.abs(zz - end) < TAU_POLE):
                    raise PoleError(f"f_E evaluated at the arc endpoint {end}", end)
            out *= np.exp(-0.5j * (alpha - beta)) * (ea - zz) / (eb - zz)
    return complex(out.ravel()[0]) if scalar else out


@dataclass(frozen=True)
class CayleyInnerFn:
    """The function scale * f_E; callable on the closed disk."""

    set: ArcSet
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def __call__(self, z):
        return self.scale * cayley_eval(self.set, z)

    def disk_zeros(self):
        return []


def circular_arc_zero(beta, alpha):
    """Zero of phi_E for the single arc (beta, alpha) with length < pi."""
    return complex(np.exp(0.5j * (alpha + beta)) * math.tan(0.25 * (math.pi - (alpha - beta))))


def _arc_polys(E):
    """f_E = c N/D with N = prod(e^{i alpha} - z), D = prod(e^{i beta} - z)."""
    num, den, c = np.array([1.0 + 0j]), np.array([1.0 + 0j]), 1.0 + 0j
    for beta, alpha in E.arcs:
        num = np.polynomial.polynomial.polymul(num, [np.exp(1j * alpha), -1.0])
        den = np.polynomial.polynomial.polymul(den, [np.exp(1j * beta), -1.0])
        c *= np.exp(-0.5j * (alpha - beta))
    return c, num, den


def phi_from_arcset(E, allow_fallback=False, check=True):
    """Inner function phi_E with T(phi_E) = f_E.

    A single arc with m(E) < 1/2 uses the closed-form zero
    e^{i(alpha + beta)/2} tan((pi - (alpha - beta))/4).  Otherwise (one
    arc with m >= 1/2, or several arcs) phi_E is the rational function
    i(cN - iD)/(cN + iD), reduced to a Blaschke product; this route needs
    ``allow_fallback=True`` and emits :class:`ClosedFormFallback`.
    ``check`` asserts T(phi_E) = f_E at probe points to 1e-9.
    """
    if E.is_empty:
        return InnerFunction.constant(1.0)
    arcs = E.arcs
    if len(arcs) == 1 and E.measure < 0.5 and not E.is_full:
        beta, alpha = arcs[0]
        phi = InnerFunction.blaschke([circular_arc_zero(beta, alpha)])
    else:
        if not allow_fallback:
            raise ArcMeasureError(
                f"no closed form for {len(arcs)} arc(s) of total measure {E.measure:.6g}; pass allow_fallback=True"
            )
        if E.is_full:
            # f = -1, phi = T^{-1}(-1) = -1
            phi = InnerFunction.constant(-1.0)
        else:
            if len(arcs) > 64:
                raise ArcMeasureError("rational route limited to 64 arcs")
            c, num, den = _arc_polys(E)
            pn = 1j * c * num + den
            pd = c * num + 1j * den
            phi = rational_inner_from_bounded(pn, pd)
        warnings.warn(
            f"phi_E for {len(arcs)} arc(s), m(E) = {E.measure:.6g}, built by the rational route",
            ClosedFormFallback,
            stacklevel=2,
        )
    if check:
        probes = 0.8 * grid_nodes(64) * np.linspace(0.2, 1.0, 64)
        err = np.max(np.abs(mobius_T(inner_eval(phi, probes)) - cayley_eval(E, probes)))
        scale = np.max(np.abs(cayley_eval(E, probes)))
        if err > 1e-9 * max(1.0, scale):
            raise ArcMeasureError(f"T(phi_E) differs from f_E by {err:.3g}")
    return phi


@dataclass(frozen=True)
class LevelSetCheck:
    """phi0 = I(0); product = e^{-mu(T)} prod |z_n|; measure = implied m(E)."""

    phi0: float
    product: float
    measure: float


def arcset_from_inner_check(I):
    """Measure m(E) implied by tan(pi/2 (1/2 - m)) = I(0) for the level set of I.

    E is {Re I < 0} (equivalently arg T(I) = pi).  Requires I(0) real and
    nonzero.
    """
    v = I.value_at_zero()
    if abs(v.imag) > 1e-12 * max(1.0, abs(v)):
        raise ValueError(f"I(0) = {v} is not real")
    if v.real == 0:
        raise ValueError("I(0) = 0")
    prod = math.exp(-I.singular_mass) * math.prod(abs(a) ** m for a, m in I.zeros)
    m = 0.5 - (2.0 / math.pi) * math.atan(v.real)
    return LevelSetCheck(float(v.real), prod, m)


def negative_real_part_measure(I, n=1 << 16):
    """Grid estimate of m{Re I < 0} on the circle for an inner function I.

    Uses :func:`smirnov.boundary.level_set_measure`; nodes on atoms are left
    undefined and fall into the under-resolved cluster.
    """
    zeta = grid_nodes(n)
    vals = np.full(n, np.nan + 0j)
    ok = np.ones(n, dtype=bool)
    for at, _ in I.atoms:
        ok &= np.abs(zeta - at) >= TAU_POLE
    vals[ok] = inner_eval(I, zeta[ok])
    return level_set_measure(vals)


# ---------------------------------------------------------------------------
# Generators


def atomic_level_endpoints(rho, k):
    """The unimodular point (k pi - 2 rho i)/(k pi + 2 rho i)."""
    return complex((k * math.pi - 2j * rho) / (k * math.pi + 2j * rho))


def atomic_level_arcs(rho, n_range):
    """Arcs I_n(rho) of {Re exp(rho (z+1)/(z-1)) < 0}, for n in ``n_range``.

    I_n runs counterclockwise from the point with k = 4n+1 to the one with
    k = 4n+3 (see :func:`atomic_level_endpoints`).  The full level set is
    the union over all integers n, negative ones included; the arcs
    accumulate at 1 from both sides.  ``n_range`` is an inclusive
    ``(n_min, n_max)`` pair or any iterable of integers.
    """
    if isinstance(n_range, tuple) and len(n_range) == 2:
        ns = range(int(n_range[0]), int(n_range[1]) + 1)
    else:
        ns = n_range
    arcs = []
    for n in ns:
        a = np.angle(atomic_level_endpoints(rho, 4 * n + 1)) % TWO_PI
        b = np.angle(atomic_level_endpoints(rho, 4 * n + 3)) % TWO_PI
        arcs.append((a, b if b >= a else b + TWO_PI))
    return ArcSet.from_arcs(arcs)


def atomic_level_measure(rho):
    """Closed form 1/2 - (2/pi) arctan(e^{-rho}) of the full level set."""
    return 0.5 - (2.0 / math.pi) * math.atan(math.exp(-rho))


def cantor_stage(depth, fatness=0.25):
    """Finite stage of a fat Cantor set on the circle.

    Stage k removes a centred open arc of length ``fatness**(k+1) * 2 pi``
    from each of the 2^k remaining arcs (fatness 1/4 gives the
    Smith-Volterra-Cantor schedule with limit measure 1/2).  The limit
    measure is 1 - fatness/(1 - 2 fatness).
    """
    if not 0 <= depth <= 20:
        raise ValueError("depth must lie in [0, 20]")
    if not 0 < fatness < 1.0 / 3.0:
        raise ValueError("fatness must lie in (0, 1/3)")
    arcs = [(0.0, TWO_PI)]
    for k in range(depth):
        gap = fatness ** (k + 1) * TWO_PI
        nxt = []
        for b, e in arcs:
            if e - b <= gap:
                raise ValueError("removal schedule exhausted an arc")
            mid = 0.5 * (b + e)
            nxt += [(b, mid - gap / 2), (mid + gap / 2, e)]
        arcs = nxt
    return ArcSet(_merge(arcs))


def cantor_limit_measure(fatness=0.25):
    return 1.0 - fatness / (1.0 - 2.0 * fatness)
