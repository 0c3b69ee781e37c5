"""Infinite products of Cayley inner functions.

Unilateral products prod_n T(phi_n) with phi_n inner, bilateral products
prod_n f_{E_n^+}/f_{E_n^-} built from the level sets of an integer boundary
argument, and the algebra around them (the quotient identity and the inner
function whose T-image is T(phi1) + T(phi2)).

For inner phi_n = e^{i theta_n} z^{m_n} B_n S_n the unilateral product
converges (absolutely, locally uniformly) exactly when

    (theta)          sum |theta_n| < inf, theta_n taken in [-pi, pi),
    (powers)         sum m_n < inf,
    (blaschke)       the zeros of all B_n together satisfy sum (1 - |a|) < inf,
    (singular-mass)  sum mu_n(T) < inf,

equivalently when prod phi_n(0) converges absolutely.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from smirnov.cayley import ArcSet, ClosedFormFallback, cayley_eval, phi_from_arcset
from smirnov.config import extended_precision_enabled
from smirnov.disk import mobius_T
from smirnov.errors import DivergentProductError, NotRationalError
from smirnov.factorization import integer_values
from smirnov.inner import InnerFunction, inner_eval, inner_to_rational, rational_inner_from_bounded
from numpy.polynomial import polynomial as P

CRITERIA = ("theta", "powers", "blaschke", "singular-mass")
DEFAULT_TRUNCATION = 256
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class Decay:
    """Nonnegative term sequence a_n (n >= 1) of a known shape.

    kind ``"zero"``: a_n = 0; ``"constant"``: a_n = scale;
    ``"geometric"``: scale * ratio^(n-1); ``"power"``: scale * n^(-exponent).
    """

    kind: str
    scale: float = 0.0
    param: float = 0.0

    def term(self, n):
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return self.scale
        if self.kind == "geometric":
            return self.scale * self.param ** (n - 1)
        if self.kind == "power":
            return self.scale * float(n) ** (-self.param)
        raise ValueError(self.kind)

    @property
    def converges(self):
        if self.kind == "zero" or self.scale == 0:
            return True
        if self.kind == "constant":
            return False
        if self.kind == "geometric":
            return self.param < 1.0
        return self.param > 1.0

    def tail(self, K):
        """Upper bound for sum_{n > K} a_n."""
        if self.kind == "zero" or self.scale == 0:
            return 0.0
        if not self.converges:
            return math.inf
        if self.kind == "geometric":
            return self.scale * self.param**K / (1.0 - self.param)
        s = self.param
        return self.scale * float(max(K, 1)) ** (1.0 - s) / (s - 1.0) if K >= 1 else math.inf

    def times(self, c):
        return Decay(self.kind, self.scale * c, self.param)


ZERO = Decay("zero")


def _decay_from_descriptor(desc, default_scale=1.0):
    kind = desc.get("decay", "geometric")
    scale = float(desc.get("scale", default_scale))
    if kind == "geometric":
        return Decay("geometric", scale, float(desc.get("ratio", 0.5)))
    if kind == "power":
        return Decay("power", scale, float(desc.get("exponent", 1.0)))
    raise ValueError(f"unknown decay {kind!r}")


@dataclass(frozen=True)
class TermData:
    """Per-term criterion quantities of phi_n."""

    theta: float
    power: int
    blaschke: float
    mass: float


def term_data(phi):
    theta = (math.atan2(phi.xi.imag, phi.xi.real) + math.pi) % (2.0 * math.pi) - math.pi
    return TermData(theta, phi.power, phi.blaschke_sum, phi.singular_mass)


class InnerSequence:
    """Sequence phi_1, phi_2, ... of inner functions.

    Build with :meth:`from_terms` (finite explicit list), :meth:`arc_family`
    or :meth:`from_descriptor` (named generator families).  Arc families are
    stored by their sets E_n, with phi_n = phi_{E_n} and T(phi_n) = f_{E_n}.
    Families carry the analytic shape of each criterion series (``series``)
    and of |1 - phi_n(0)| (``deviation``); sequences without them only
    support empirical verdicts.
    """

    def __init__(self, term=None, arcset=None, length=None, series=None, deviation=None, name="custom"):
        if (term is None) == (arcset is None):
            raise ValueError("give exactly one of term or arcset")
        self._term = term
        self._arcset = arcset
        self.length = length
        self.series = series
        self.deviation = deviation
        self.name = name

    # constructors -----------------------------------------------------------

    @classmethod
    def from_terms(cls, terms):
        terms = tuple(terms)
        return cls(term=lambda n: terms[n - 1], length=len(terms), name="explicit")

    @classmethod
    def from_arcsets(cls, sets):
        sets = tuple(sets)
        return cls(arcset=lambda n: sets[n - 1], length=len(sets), name="explicit-arcs")

    @classmethod
    def arc_family(cls, measures, name="arcs", offset=GOLDEN_ANGLE):
        """Single arcs E_n of measure ``measures.term(n)`` starting at angle n*offset."""

        def arcset(n):
            m = measures.term(n)
            start = (n * offset) % (2.0 * math.pi)
            return ArcSet.from_arcs([(start, start + 2.0 * math.pi * m)])

        if measures.term(1) > 0.5:
            raise ValueError("arc measures must not exceed 1/2")
        series = {"theta": ZERO, "powers": ZERO, "blaschke": measures, "singular-mass": ZERO}
        return cls(arcset=arcset, series=series, deviation=measures.times(4.0), name=name)

    @classmethod
    def from_descriptor(cls, desc):
        """Generator family from a JSON-style dict.

        Families: ``geometric-arcs`` (ratio, m0), ``harmonic-arcs`` (scale:
        m_n = scale/n), ``arcs`` (decay keys), ``blaschke-zeros`` (1 - |a_n|
        by decay keys, ``angle`` radians or ``"golden"``), ``rotations``
        (theta_n by decay keys), ``powers`` (``k``), ``atoms`` (mu_n by decay
        desc), ``explicit`` (``terms``: inner descriptors handled by the CLI).
        """
        fam = desc.get("family")
        if fam == "geometric-arcs":
            r = float(desc.get("ratio", 0.5))
            return cls.arc_family(Decay("geometric", float(desc.get("m0", r)), r), fam)
        if fam == "harmonic-arcs":
            return cls.arc_family(Decay("power", float(desc.get("scale", 0.5)), 1.0), fam)
        if fam == "arcs":
            return cls.arc_family(_decay_from_descriptor(desc, 0.5), fam)
        if fam == "blaschke-zeros":
            d = _decay_from_descriptor(desc, 0.5)
            angle = desc.get("angle", 0.0)

            def term(n):
                if 1.0 - d.term(n) == 1.0:
                    return InnerFunction.constant(1.0)  # factor is 1 to double precision
                t = n * GOLDEN_ANGLE if angle == "golden" else float(angle)
                return InnerFunction.blaschke([(1.0 - d.term(n)) * complex(math.cos(t), math.sin(t))])

            if d.term(1) >= 1.0 or d.term(1) <= 0.0:
                raise ValueError("zero distances 1 - |a_n| must lie in (0, 1)")
            return cls(term=term, series=_only("blaschke", d), deviation=d, name=fam)
        if fam == "rotations":
            d = _decay_from_descriptor(desc, 1.0)
            term = lambda n: InnerFunction.constant(complex(math.cos(d.term(n)), math.sin(d.term(n))))
            return cls(term=term, series=_only("theta", d), deviation=d, name=fam)
        if fam == "powers":
            k = int(desc.get("k", 1))
            d = Decay("constant", float(k))
            return cls(
                term=lambda n: InnerFunction.monomial(k),
                series=_only("powers", d),
                deviation=Decay("constant", 1.0),
                name=fam,
            )
        if fam == "atoms":
            d = _decay_from_descriptor(desc, 1.0)

            def term(n):
                t = n * GOLDEN_ANGLE
                return InnerFunction.atomic(d.term(n), complex(math.cos(t), math.sin(t)))

            return cls(term=term, series=_only("singular-mass", d), deviation=d, name=fam)
        raise ValueError(f"unknown family {fam!r}")

    # access -----------------------------------------------------------------

    @property
    def is_arc_family(self):
        return self._arcset is not None

    def _check_index(self, n):
        if n < 1 or (self.length is not None and n > self.length):
            raise IndexError(n)

    def arcset(self, n):
        self._check_index(n)
        return self._arcset(n) if self._arcset is not None else None

    def term(self, n):
        """phi_n as an InnerFunction (built from E_n for arc families)."""
        self._check_index(n)
        if self._term is not None:
            return self._term(n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ClosedFormFallback)
            return phi_from_arcset(self._arcset(n), allow_fallback=True, check=False)

    def cayley_factor(self, n, z):
        """T(phi_n)(z)."""
        if self._arcset is not None:
            self._check_index(n)
            return cayley_eval(self._arcset(n), z)
        return mobius_T(inner_eval(self.term(n), z))

    def phi_at_zero(self, n):
        if self._arcset is not None:
            self._check_index(n)
            m = self._arcset(n).measure
            return complex(math.tan(0.5 * math.pi * (0.5 - m))) if m < 0.5 else self.term(n).value_at_zero()
        return self.term(n).value_at_zero()

    def term_data(self, n):
        if self._arcset is not None:
            m = self.arcset(n).measure
            if m < 0.5:
                return TermData(0.0, 0, 1.0 - math.tan(0.5 * math.pi * (0.5 - m)), 0.0)
        return term_data(self.term(n))

    def _count(self, K):
        return K if self.length is None else min(K, self.length)

    # products ---------------------------------------------------------------

    def partial_product(self, z, K):
        """(prod_{n<=K} T(phi_n)(z), tail bound) -- the truncated-product protocol."""
        res = unilateral_eval(self, z, K, trace=False)
        return res.value, res.tail_bound


def _only(tag, d):
    return {t: (d if t == tag else ZERO) for t in CRITERIA}


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of :func:`unilateral_verdict`.

    ``failing`` names the first criterion that fails (or fails to settle),
    ``tail`` bounds sum_{n>K} |1 - phi_n(0)| (inf when unknown) and
    ``partial_sums`` maps each criterion to its partial-sum trace.
    """

    status: str
    failing: str
    tail: float
    partial_sums: dict = field(default_factory=dict, compare=False)
    basis: str = "analytic"


def _partial_sums(s, K):
    L = s._count(K)
    if s.series is not None:
        rows = np.array([[s.series[t].term(n) for t in CRITERIA] for n in range(1, L + 1)])
    else:
        data = (s.term_data(n) for n in range(1, L + 1))
        rows = np.array([[abs(d.theta), d.power, d.blaschke, d.mass] for d in data])
    rows = rows.reshape(L, 4)
    return {tag: np.cumsum(rows[:, i]) for i, tag in enumerate(CRITERIA)}


def _stabilized(trace, rel=1e-10):
    if trace.size < 4:
        return trace.size > 0 and False
    q = trace.size - trace.size // 4 - 1
    last = trace[-1]
    return abs(last - trace[q]) <= rel * max(abs(last), 1e-300) or (last == 0 and trace[q] == 0)


def unilateral_verdict(s, K=DEFAULT_TRUNCATION):
    """Convergence verdict for prod T(phi_n) from the four criteria.

    Named families are decided from the analytic shape of each criterion
    series; a finite sequence trivially converges; otherwise partial sums
    over ``K`` terms are checked for stabilization (relative increment
    < 1e-10 over the last quarter) and the verdict is at best inconclusive.
    """
    sums = _partial_sums(s, K)
    if s.series is not None:
        for tag in CRITERIA:
            if not s.series[tag].converges:
                return ConvergenceVerdict("diverges", tag, math.inf, sums)
        return ConvergenceVerdict("converges", "none", s.deviation.tail(K), sums)
    if s.length is not None:
        return ConvergenceVerdict("converges", "none", 0.0 if s.length <= K else math.inf, sums, "finite")
    for tag in CRITERIA:
        if not _stabilized(sums[tag]):
            return ConvergenceVerdict("inconclusive", tag, math.inf, sums, "empirical")
    return ConvergenceVerdict("inconclusive", "none", math.inf, sums, "empirical")


@dataclass(frozen=True)
class UnilateralResult:
    """Partial product value with its error bound.

    ``tail_bound`` bounds |P_inf - P_K| (see :func:`product_tail_bound`);
    ``schwarz_sum`` is ((1+|z|)/(1-|z|)) sum_{n>K} |1 - phi_n(0)|, which
    bounds sum_{n>K} |1 - phi_n(z)|.  ``trace`` holds P_1..P_K when requested.
    """

    value: object
    tail_bound: object
    schwarz_sum: object
    trace: np.ndarray | None = None


def product_tail_bound(partial, z, dev_tail, dev_next):
    """Bound on |prod_{n>K} T(phi_n)(z) - 1| times |P_K|.

    With S = ((1+|z|)/(1-|z|)) dev_tail and s = ((1+|z|)/(1-|z|)) dev_next
    (the largest remaining |1 - phi_n(0)| scaled likewise), each remaining
    factor satisfies |1 - T(phi_n(z))| <= sqrt2 S_n/(sqrt2 - s), so the bound
    is |P_K| (exp(sqrt2 S/(sqrt2 - s)) - 1), infinite when s >= sqrt2.
    """
    r = np.abs(np.asarray(z))
    k = (1.0 + r) / (1.0 - r)
    S, s = k * dev_tail, k * dev_next
    root2 = math.sqrt(2.0)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        t = np.where(s < root2, root2 * S / (root2 - s), np.inf)
        bound = np.abs(partial) * np.expm1(t)
    bound = np.where(S == 0, 0.0, bound)
    return bound, S


def _log_product(factors):
    """exp(sum log) with exactly rounded sums, pointwise over the last axis-0 stack."""
    logs = np.log(factors)
    re = np.apply_along_axis(math.fsum, 0, logs.real)
    im = np.apply_along_axis(math.fsum, 0, logs.imag)
    return np.exp(re + 1j * im)


def unilateral_eval(s, z, K=DEFAULT_TRUNCATION, trace=True, require_verdict=True):
    """prod_{n<=K} T(phi_n)(z) with a tail bound.

    Raises :class:`DivergentProductError` unless the verdict is
    ``converges`` (pass ``require_verdict=False`` to skip that check, e.g.
    for plotting partial products of a divergent family).
    """
    if require_verdict:
        v = unilateral_verdict(s, K)
        if v.status != "converges":
            raise DivergentProductError(f"product verdict is {v.status} (criterion {v.failing})")
    L = s._count(K)
    zz = np.asarray(z, dtype=np.complex128)
    factors = np.array([s.cayley_factor(n, zz) for n in range(1, L + 1)]).reshape((L,) + zz.shape)
    if extended_precision_enabled():
        value = _log_product(factors)
        tr = None
    else:
        tr = np.cumprod(factors, axis=0)
        value = tr[-1] if L else np.ones(zz.shape, dtype=np.complex128)
    if s.deviation is not None:
        dev_tail, dev_next = s.deviation.tail(L), s.deviation.term(L + 1)
    elif s.length is not None and L == s.length:
        dev_tail = dev_next = 0.0
    else:
        dev_tail = dev_next = math.inf
    bound, S = product_tail_bound(value, zz, dev_tail, dev_next)
    if np.ndim(z) == 0:
        value, bound, S = complex(value), float(bound), float(S)
    return UnilateralResult(value, bound, S, tr if trace else None)


def unilateral_trace_bounds(s, z, K=DEFAULT_TRUNCATION):
    """Tail bound after each n <= K at a scalar z (for trace export)."""
    res = unilateral_eval(s, z, K, trace=True, require_verdict=False)
    out = []
    for n, p in enumerate(res.trace, start=1):
        if s.deviation is not None:
            b, _ = product_tail_bound(p, z, s.deviation.tail(n), s.deviation.term(n + 1))
        else:
            b = 0.0 if (s.length is not None and n == s.length) else math.inf
        out.append(float(b))
    return res.trace, np.array(out)


# ---------------------------------------------------------------------------
# Bilateral products


@dataclass(frozen=True)
class BilateralSplit:
    """Level sets E_n^+ = {v >= n} and E_n^- = {v <= -n}, n = 1, 2, ..."""

    plus: tuple
    minus: tuple

    @property
    def depth(self):
        return max(len(self.plus), len(self.minus))

    def level(self, n, sign):
        sets = self.plus if sign > 0 else self.minus
        return sets[n - 1] if n <= len(sets) else ArcSet.empty()


def bilateral_split(v):
    """Positive and negative level sets of an integer grid (read cellwise)."""
    k = integer_values(v)
    top = int(k.max(initial=0))
    bottom = int(-k.min(initial=0))
    plus = tuple(ArcSet.from_cells(k >= n) for n in range(1, top + 1))
    minus = tuple(ArcSet.from_cells(k <= -n) for n in range(1, bottom + 1))
    return BilateralSplit(plus, minus)


def odd_decreasing_split(alphas):
    """E_n^+ = [0, alpha_n) and E_n^- = [-alpha_n, 0) for decreasing alpha_n."""
    alphas = [float(a) for a in alphas]
    if any(b > a for a, b in zip(alphas, alphas[1:])) or any(a <= 0 or a > math.pi for a in alphas):
        raise ValueError("alphas must be decreasing and lie in (0, pi]")
    plus = tuple(ArcSet.from_arcs([(0.0, a)]) for a in alphas)
    minus = tuple(ArcSet.from_arcs([(-a, 0.0)]) for a in alphas)
    return BilateralSplit(plus, minus)


@dataclass(frozen=True)
class BilateralResult:
    """Partial bilateral product and diagnostics.

    ``abs_sum`` is sum_{n<=K} |m(E_n^+) - m(E_n^-)| and ``abs_trace`` its
    running values; ``deviations[n-1]`` is |f_{E_n^+}(z)/f_{E_n^-}(z) - 1|.
    """

    value: object
    abs_sum: float
    abs_trace: np.ndarray
    deviations: np.ndarray


def bilateral_eval(split, z, K=None):
    """prod_{n<=K} f_{E_n^+}(z)/f_{E_n^-}(z), truncated symmetrically in n."""
    K = split.depth if K is None else min(int(K), split.depth)
    zz = np.asarray(z, dtype=np.complex128)
    value = np.ones(zz.shape, dtype=np.complex128)
    devs, diffs = [], []
    for n in range(1, K + 1):
        Ep, Em = split.level(n, +1), split.level(n, -1)
        q = cayley_eval(Ep, zz) / cayley_eval(Em, zz)
        value = value * q
        devs.append(np.abs(q - 1.0))
        diffs.append(abs(Ep.measure - Em.measure))
    trace = np.cumsum(diffs) if diffs else np.zeros(0)
    value = complex(value) if np.ndim(z) == 0 else value
    return BilateralResult(value, float(trace[-1]) if K else 0.0, trace, np.array(devs))


# ---------------------------------------------------------------------------
# Algebraic identities


@dataclass(frozen=True)
class DeviationResult:
    """1 - T(phi+)/T(phi-) with the closed-form check and the size bound.

    ``identity_residual`` compares against 2i(phi+ - phi-)/((1 + i phi+)(1 - i phi-));
    ``bound`` is (2/delta^2)|phi+ - phi-| with delta = min(|1 + i phi+|, |1 - i phi-|).
    """

    value: complex
    identity_residual: float
    bound: float
    delta: float


def quotient_deviation(phi_plus, phi_minus, z):
    a = complex(inner_eval(phi_plus, z))
    b = complex(inner_eval(phi_minus, z))
    value = 1.0 - mobius_T(a) / mobius_T(b)
    closed = 2j * (a - b) / ((1.0 + 1j * a) * (1.0 - 1j * b))
    delta = min(abs(1.0 + 1j * a), abs(1.0 - 1j * b))
    return DeviationResult(value, abs(value - closed), 2.0 * abs(a - b) / delta**2, delta)


def cayley_sum_inner(phi1, phi2, check=True):
    """Inner phi with T(phi) = T(phi1) + T(phi2), for rational inner inputs.

    phi = (3i phi1 phi2 + phi1 + phi2 + i)/(3 + i phi1 + i phi2 + phi1 phi2),
    reduced (common boundary roots cancelled) to a finite Blaschke product.
    """
    try:
        n1, d1 = inner_to_rational(phi1)
        n2, d2 = inner_to_rational(phi2)
    except NotRationalError as exc:
        raise NotRationalError(f"cayley_sum_inner needs rational inner inputs: {exc}") from None
    mul, add = P.polymul, P.polyadd
    dd, nn = mul(d1, d2), mul(n1, n2)
    cross = add(mul(n1, d2), mul(n2, d1))
    num = add(add(3j * nn, cross), 1j * dd)
    den = add(add(3.0 * dd, 1j * cross), nn)
    phi = rational_inner_from_bounded(num, den)
    if check:
        probes = np.array([0.1 + 0.2j, -0.4 + 0.3j, 0.6 - 0.1j, -0.2 - 0.7j])
        lhs = mobius_T(inner_eval(phi, probes))
        rhs = mobius_T(inner_eval(phi1, probes)) + mobius_T(inner_eval(phi2, probes))
        if np.max(np.abs(lhs - rhs)) > 1e-8 * max(1.0, np.max(np.abs(rhs))):
            raise ArithmeticError("T(phi) != T(phi1) + T(phi2) after reduction")
    return phi
