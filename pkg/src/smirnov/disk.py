"""Disk primitives: the Cayley-type map T, its inverse, the Koebe map, and a
small immutable expression tree for composite functions on the disk.

All point functions accept a complex scalar or an array and return the same
shape.  Points within the chordal pole tolerance of a singularity raise
:class:`~smirnov.errors.PoleError`; passing ``extended=True`` with a scalar
instead maps the pole to :data:`AT_INFINITY`, and ``AT_INFINITY`` itself is
accepted as input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from smirnov.config import TAU_POLE
from smirnov.errors import PoleError


class _AtInfinity:
    """Marker for the point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_INFINITY"

    def __reduce__(self):
        return (_AtInfinity, ())


AT_INFINITY = _AtInfinity()


def chordal_distance(z, w):
    """Chordal distance on the Riemann sphere; ``w`` may be ``AT_INFINITY``."""
    z = np.asarray(z, dtype=np.complex128)
    if w is AT_INFINITY:
        return 2.0 / np.sqrt(1.0 + np.abs(z) ** 2)
    return 2.0 * np.abs(z - w) / np.sqrt((1.0 + np.abs(z) ** 2) * (1.0 + abs(w) ** 2))


def _check_pole(z, pole, name):
    d = chordal_distance(z, pole)
    if np.any(d < TAU_POLE):
        raise PoleError(f"{name} evaluated within {TAU_POLE:g} (chordal) of its pole {pole}", pole)


def _mobius(z, a, b, c, d, pole, at_inf, name, extended):
    """Evaluate (a z + b)/(c z + d) with pole and infinity bookkeeping."""
    if z is AT_INFINITY:
        return at_inf
    scalar = np.ndim(z) == 0
    if scalar and extended and chordal_distance(z, pole) < TAU_POLE:
        return AT_INFINITY
    _check_pole(z, pole, name)
    zz = np.asarray(z, dtype=np.complex128)
    out = (a * zz + b) / (c * zz + d)
    return complex(out) if scalar else out


def mobius_T(z, extended=False):
    """T(z) = i(1 - iz)/(1 + iz); maps the disk onto the upper half plane.

    The pole is z = i.  T(AT_INFINITY) = -i.
    """
    return _mobius(z, 1.0, 1j, 1j, 1.0, 1j, -1j, "T", extended)


def mobius_T_inv(z, extended=False):
    """Inverse of :func:`mobius_T`: i(z - i)/(z + i).  Pole at z = -i."""
    return _mobius(z, 1j, 1.0, 1.0, 1j, -1j, 1j, "T^-1", extended)


def koebe_K(z, extended=False):
    """Koebe map K(z) = -4z/(1 - z)^2, univalent from the disk onto C minus [1, inf)."""
    if z is AT_INFINITY:
        return 0j
    scalar = np.ndim(z) == 0
    if scalar and extended and chordal_distance(z, 1.0) < TAU_POLE:
        return AT_INFINITY
    _check_pole(z, 1.0, "K")
    zz = np.asarray(z, dtype=np.complex128)
    out = -4.0 * zz / (1.0 - zz) ** 2
    return complex(out) if scalar else out


# ---------------------------------------------------------------------------
# Expression trees

KINDS = (
    "constant",
    "inner-leaf",
    "outer-leaf",
    "cayley-leaf",
    "product",
    "quotient",
    "integer-power",
    "sqrt-outer",
    "apply-T",
    "apply-T-inverse",
    "apply-K",
    "truncated-product",
)


@dataclass(frozen=True)
class FunctionExpr:
    """Immutable expression node.

    Build nodes with the module-level constructors (:func:`constant`,
    :func:`leaf`, :func:`product`, ...) rather than directly.  ``zeros`` lists
    known zeros inside the disk, ``poles`` the declared poles; both are
    computed at construction.
    """

    kind: str
    children: tuple = ()
    payload: Any = None
    zeros: tuple = field(default=(), compare=False)
    poles: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown expression kind {self.kind!r}")

    def __call__(self, z):
        return expr_eval(self, z)

    def __mul__(self, other):
        return product(self, _coerce(other))

    def __rmul__(self, other):
        return product(_coerce(other), self)

    def __truediv__(self, other):
        return quotient(self, _coerce(other))


def _coerce(x):
    return x if isinstance(x, FunctionExpr) else constant(x)


def _dedupe(points):
    out = []
    for p in points:
        if all(abs(p - q) > 1e-14 for q in out):
            out.append(complex(p))
    return tuple(out)


def constant(c):
    return FunctionExpr("constant", payload=complex(c))


_LEAF_KINDS = {"inner": "inner-leaf", "outer": "outer-leaf", "cayley": "cayley-leaf"}


def leaf(kind, fn):
    """Wrap a callable function object as a leaf.

    ``kind`` is ``"inner"``, ``"outer"`` or ``"cayley"``.  If the object has a
    ``disk_zeros()`` method its zeros are recorded so that quotients by it can
    declare poles.
    """
    node_kind = _LEAF_KINDS[kind]
    zeros = tuple(fn.disk_zeros()) if hasattr(fn, "disk_zeros") else ()
    return FunctionExpr(node_kind, payload=fn, zeros=_dedupe(zeros))


def inner_leaf(fn):
    return leaf("inner", fn)


def outer_leaf(fn):
    return leaf("outer", fn)


def cayley_leaf(fn):
    return leaf("cayley", fn)


def product(*factors):
    factors = tuple(_coerce(f) for f in factors)
    zeros = _dedupe([a for f in factors for a in f.zeros])
    poles = _dedupe([p for f in factors for p in f.poles])
    return FunctionExpr("product", children=factors, zeros=zeros, poles=poles)


def quotient(num, den):
    num, den = _coerce(num), _coerce(den)
    if den.kind == "constant" and den.payload == 0:
        raise PoleError("quotient by the zero constant")
    poles = _dedupe(list(num.poles) + list(den.poles) + list(den.zeros))
    return FunctionExpr("quotient", children=(num, den), zeros=num.zeros, poles=poles)


def integer_power(e, n):
    e = _coerce(e)
    n = int(n)
    if n >= 0:
        return FunctionExpr("integer-power", (e,), n, zeros=e.zeros if n else (), poles=e.poles)
    return FunctionExpr("integer-power", (e,), n, poles=_dedupe(list(e.poles) + list(e.zeros)))


def sqrt_outer(e):
    """Square root of an outer leaf, using the leaf's own ``sqrt()`` branch."""
    if e.kind != "outer-leaf":
        raise TypeError("sqrt-outer applies to outer leaves only")
    return FunctionExpr("sqrt-outer", (e,), e.payload.sqrt())


def apply_T(e):
    return FunctionExpr("apply-T", (_coerce(e),), poles=_coerce(e).poles)


def apply_T_inverse(e):
    return FunctionExpr("apply-T-inverse", (_coerce(e),), poles=_coerce(e).poles)


def apply_K(e):
    e = _coerce(e)
    return FunctionExpr("apply-K", (e,), zeros=e.zeros, poles=e.poles)


def truncated_product(sequence, K):
    """Product of the first ``K`` factors of ``sequence``.

    ``sequence`` must provide ``partial_product(z, K) -> (values, tail_bound)``;
    :class:`smirnov.products.InnerSequence` does.
    """
    return FunctionExpr("truncated-product", payload=(sequence, int(K)))


# ---------------------------------------------------------------------------
# Evaluation


@dataclass(frozen=True)
class EvalResult:
    """Value plus metadata from :func:`expr_eval_detailed`.

    ``tail_bound`` is the largest tail bound reported by truncated-product
    nodes (``None`` if the tree has none); ``warnings`` lists non-fatal issues
    such as an unconverged truncation.
    """

    value: Any
    tail_bound: float | None
    warnings: tuple


class _Meta:
    def __init__(self, tol):
        self.tol = tol
        self.tail = None
        self.warnings = []


def _eval(e, z, meta):
    k = e.kind
    if k == "constant":
        return np.full(z.shape, e.payload, dtype=np.complex128)
    if k in ("inner-leaf", "outer-leaf", "cayley-leaf", "sqrt-outer"):
        return np.asarray(e.payload(z), dtype=np.complex128)
    if k == "product":
        out = np.ones(z.shape, dtype=np.complex128)
        for c in e.children:
            out = out * _eval(c, z, meta)
        return out
    if k == "quotient":
        num = _eval(e.children[0], z, meta)
        den = _eval(e.children[1], z, meta)
        if np.any(den == 0) or not np.all(np.isfinite(den)):
            raise PoleError("quotient denominator vanishes at an evaluation point")
        return num / den
    if k == "integer-power":
        base = _eval(e.children[0], z, meta)
        if e.payload < 0 and np.any(base == 0):
            raise PoleError("negative power of a vanishing value")
        return base ** e.payload
    if k == "apply-T":
        return mobius_T(_eval(e.children[0], z, meta))
    if k == "apply-T-inverse":
        return mobius_T_inv(_eval(e.children[0], z, meta))
    if k == "apply-K":
        return koebe_K(_eval(e.children[0], z, meta))
    if k == "truncated-product":
        seq, K = e.payload
        val, tail = seq.partial_product(z, K)
        tail = float(np.max(tail)) if np.size(tail) else 0.0
        meta.tail = tail if meta.tail is None else max(meta.tail, tail)
        if not tail <= meta.tol:
            meta.warnings.append(f"truncated product at K={K} has tail bound {tail:.3g} > {meta.tol:g}")
        return np.asarray(val, dtype=np.complex128)
    raise AssertionError(k)


def _prepare(e, z):
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    for p in e.poles:
        _check_pole(zz, p, "expression")
    return scalar, zz


def expr_eval(e, z):
    """Evaluate expression ``e`` at ``z`` (scalar or array)."""
    return expr_eval_detailed(e, z).value


def expr_eval_detailed(e, z, tol=1e-8):
    """Evaluate ``e`` and report truncation metadata.

    ``tol`` is the tail-bound level above which a truncated-product node adds
    a warning instead of failing.
    """
    scalar, zz = _prepare(e, z)
    meta = _Meta(tol)
    val = _eval(e, zz, meta)
    value = complex(val[0]) if scalar else val.reshape(np.shape(z))
    return EvalResult(value, meta.tail, tuple(meta.warnings))

