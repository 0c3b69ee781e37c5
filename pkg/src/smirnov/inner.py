"""Inner functions with finite data: a unimodular constant, a power of z, a
finite Blaschke product and a finite atomic singular factor,

    I(z) = xi z^N prod_k ((|a_k|/a_k)(a_k - z)/(1 - conj(a_k) z))^{m_k}
           * exp(-sum_k mu_k (zeta_k + z)/(zeta_k - z)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from smirnov import kernels
from smirnov.boundary import grid_nodes
from smirnov.config import TAU_POLE, UNIMODULAR_TOL, extended_precision_enabled
from smirnov.errors import NotInnerError, NotRationalError, PoleError, PoleInsideDiskError


def _unimodular(x, what):
    x = complex(x)
    if abs(abs(x) - 1.0) > 1e-12:
        raise ValueError(f"{what} must be unimodular, got |{x}| = {abs(x)}")
    return x / abs(x)


@dataclass(frozen=True)
class InnerFunction:
    """Finite inner function data.

    Parameters
    ----------
    xi : complex
        Unimodular constant.
    power : int
        Order of the zero at the origin.
    zeros : tuple of (complex, int)
        Blaschke zeros ``a`` with ``0 < |a| < 1`` and their multiplicities.
    atoms : tuple of (complex, float)
        Atoms ``zeta`` on the circle with positive masses.
    """

    xi: complex = 1.0 + 0j
    power: int = 0
    zeros: tuple = ()
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "xi", _unimodular(self.xi, "xi"))
        if int(self.power) != self.power or self.power < 0:
            raise ValueError("power must be a nonnegative integer")
        object.__setattr__(self, "power", int(self.power))
        zs = []
        for item in self.zeros:
            a, m = (item, 1) if np.ndim(item) == 0 else item
            a = complex(a)
            if not 0.0 < abs(a) < 1.0:
                raise ValueError(f"Blaschke zero {a} must satisfy 0 < |a| < 1")
            if int(m) != m or m < 1:
                raise ValueError("zero multiplicities must be positive integers")
            zs.append((a, int(m)))
        ats = []
        for zeta, mu in self.atoms:
            zeta = _unimodular(zeta, "atom location")
            if not mu > 0:
                raise ValueError("atom masses must be positive")
            ats.append((zeta, float(mu)))
        object.__setattr__(self, "zeros", tuple(zs))
        object.__setattr__(self, "atoms", tuple(ats))

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, xi=1.0):
        return cls(xi=xi)

    @classmethod
    def monomial(cls, n=1, xi=1.0):
        return cls(xi=xi, power=n)

    @classmethod
    def blaschke(cls, zeros, xi=1.0):
        """Blaschke product over ``zeros``; zeros at the origin go to ``power``."""
        power = sum(1 for a in zeros if a == 0)
        return cls(xi=xi, power=power, zeros=tuple((a, 1) for a in zeros if a != 0))

    @classmethod
    def atomic(cls, mass, zeta=1.0):
        """Singular inner function of a single atom: exp(-mass (zeta + z)/(zeta - z))."""
        return cls(atoms=((zeta, mass),))

    # queries ----------------------------------------------------------------

    def __call__(self, z):
        return inner_eval(self, z)

    def disk_zeros(self):
        out = [0j] * self.power
        for a, m in self.zeros:
            out += [a] * m
        return out

    @property
    def is_constant(self):
        return self.power == 0 and not self.zeros and not self.atoms

    @property
    def singular_mass(self):
        return float(sum(mu for _, mu in self.atoms))

    @property
    def blaschke_sum(self):
        """sum of m_k (1 - |a_k|) over the nonzero zeros."""
        return float(sum(m * (1.0 - abs(a)) for a, m in self.zeros))

    def value_at_zero(self):
        return complex(inner_eval(self, 0.0))

    def scaled(self, c):
        """Same data with xi multiplied by the unimodular ``c``."""
        return InnerFunction(self.xi * c, self.power, self.zeros, self.atoms)


def _flat_zeros(I):
    return np.array([a for a, m in I.zeros for _ in range(m)], dtype=np.complex128)


def inner_eval(I, z):
    """Evaluate ``I`` at ``z`` (scalar or array) in the closed disk.

    Raises :class:`PoleError` within the pole tolerance of an atom and
    ``ValueError`` outside the closed disk.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    if np.any(np.abs(zz) > 1.0 + 1e-12):
        raise ValueError("inner functions are evaluated on the closed unit disk only")
    for zeta, _ in I.atoms:
        if np.any(np.abs(zz - zeta) < TAU_POLE):
            raise PoleError(f"inner function evaluated at its atom {zeta}", zeta)
    if extended_precision_enabled():
        out = np.array([_eval_compensated(I, w) for w in zz])
    else:
        out = I.xi * zz**I.power
        if I.zeros:
            out = out * kernels.blaschke_product(_flat_zeros(I), zz)
        if I.atoms:
            s = np.zeros_like(zz)
            for zeta, mu in I.atoms:
                s += mu * (zeta + zz) / (zeta - zz)
            out = out * np.exp(-s)
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def _eval_compensated(I, w):
    """Scalar evaluation summing the factor logarithms with exact rounding."""
    logs = [cmath.log(I.xi)]
    if I.power:
        if w == 0:
            return 0j
        logs.append(I.power * cmath.log(w))
    for a, m in I.zeros:
        f = (abs(a) / a) * (a - w) / (1 - a.conjugate() * w)
        if f == 0:
            return 0j
        logs.extend([cmath.log(f)] * m)
    for zeta, mu in I.atoms:
        logs.append(-mu * (zeta + w) / (zeta - w))
    re = math.fsum(x.real for x in logs)
    im = math.fsum(x.imag for x in logs)
    return cmath.exp(complex(re, im))


def inner_multiply(I1, I2):
    """Product of two inner functions as merged data."""
    zeros = {}
    for a, m in I1.zeros + I2.zeros:
        zeros[a] = zeros.get(a, 0) + m
    atoms = {}
    for zeta, mu in I1.atoms + I2.atoms:
        atoms[zeta] = atoms.get(zeta, 0.0) + mu
    return InnerFunction(
        I1.xi * I2.xi,
        I1.power + I2.power,
        tuple(zeros.items()),
        tuple(atoms.items()),
    )


# ---------------------------------------------------------------------------
# Rational inner functions


def _trim(c):
    c = np.atleast_1d(np.asarray(c, dtype=np.complex128))
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0:
        raise NotRationalError("zero polynomial")
    k = c.size
    while k > 1 and abs(c[k - 1]) <= 1e-14 * scale:
        k -= 1
    return c[:k]


def _roots(c):
    return P.polyroots(c) if c.size > 1 else np.array([], dtype=np.complex128)


def _cancel_common(nr, dr, tol):
    nr, dr = list(nr), list(dr)
    i = 0
    while i < len(dr):
        d = dr[i]
        j = int(np.argmin([abs(x - d) for x in nr])) if nr else -1
        if j >= 0 and abs(nr[j] - d) <= tol * max(1.0, abs(d)):
            nr.pop(j)
            dr.pop(i)
        else:
            i += 1
    return nr, dr


def rational_inner_from_bounded(num, den, probes=256, root_tol=1e-6):
    """Finite Blaschke product equal to the rational function num/den.

    ``num`` and ``den`` are coefficient sequences in increasing degree
    (numpy polynomial convention).  Roots are found with companion-matrix
    eigenvalues; numerator/denominator roots closer than ``root_tol`` are
    cancelled first.

    Raises
    ------
    PoleInsideDiskError
        An uncancelled denominator root lies in the closed disk.
    NotInnerError
        |num/den| deviates from 1 on the circle by more than 1e-8.
    """
    num, den = _trim(num), _trim(den)
    zeta = grid_nodes(probes)
    with np.errstate(divide="ignore", invalid="ignore"):
        mod = np.abs(P.polyval(zeta, num) / P.polyval(zeta, den))
    nr, dr = _cancel_common(_roots(num), _roots(den), root_tol)
    bad = [d for d in dr if abs(d) <= 1.0 + 1e-9]
    if bad:
        raise PoleInsideDiskError(f"pole of num/den in the closed disk at {bad[0]}")
    finite = np.isfinite(mod)
    if not np.all(finite) or np.max(np.abs(mod - 1.0)) > UNIMODULAR_TOL:
        worst = float(np.max(np.abs(mod[finite] - 1.0))) if np.any(finite) else float("inf")
        raise NotInnerError(f"|num/den| deviates from 1 on the circle by {worst:.3g}")
    inside = [r for r in nr if abs(r) < 1.0]
    power = sum(1 for r in inside if abs(r) < 1e-12)
    zeros = tuple((complex(r), 1) for r in inside if abs(r) >= 1e-12)
    shape = InnerFunction(1.0, power, zeros)
    probe = _probe_point(shape)
    ratio = complex(P.polyval(probe, num) / P.polyval(probe, den)) / inner_eval(shape, probe)
    return shape.scaled(ratio / abs(ratio))


def _probe_point(I):
    cands = [0.3 + 0.2j, -0.25 + 0.35j, 0.1 - 0.4j, -0.45 - 0.1j]
    zs = I.disk_zeros()
    return max(cands, key=lambda c: min([abs(c - a) for a in zs] + [1.0]))


def inner_to_rational(I):
    """Coefficient arrays (num, den), increasing degree, for atom-free ``I``."""
    if I.atoms:
        raise NotRationalError("inner function with a singular factor is not rational")
    num = np.array([I.xi], dtype=np.complex128)
    if I.power:
        num = P.polymul(num, np.eye(1, I.power + 1, I.power).ravel())
    den = np.array([1.0 + 0j])
    for a, m in I.zeros:
        for _ in range(m):
            num = P.polymul(num, (abs(a) / a) * np.array([a, -1.0]))
            den = P.polymul(den, np.array([1.0, -np.conj(a)]))
    return num, den


def schwarz_bound(I, z):
    """Right side of |1 - I(z)| <= ((1 + |z|)/(1 - |z|)) |1 - I(0)|."""
    r = np.abs(np.asarray(z))
    return (1.0 + r) / (1.0 - r) * abs(1.0 - I.value_at_zero())
