"""Self-check suites run by ``smirnov verify``.

Each suite returns a list of :class:`Check` records (residual against a
tolerance).  Random probe points come from ``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from smirnov.a_integral import TruncationLadder, hfs1_certificate, herglotz_a_integral
from smirnov.boundary import (
    BoundaryGrid,
    arc_indicator_grid,
    conjugate,
    distribution,
    herglotz_extend,
    weak_decay_test,
)
from smirnov.catalog import cayley_singular, halfplane, javad, koebe_identity, koebe_singular
from smirnov.cayley import ArcSet, ClosedFormFallback, cayley_eval, circular_arc_zero, phi_from_arcset
from smirnov.disk import mobius_T, mobius_T_inv
from smirnov.factorization import helson_decompose, koebe_factor, sum_of_squares
from smirnov.hp import membership_trend
from smirnov.products import (
    InnerSequence,
    bilateral_eval,
    bilateral_split,
    unilateral_eval,
    unilateral_verdict,
)

SUITES = (
    "t-identities",
    "cayley-identities",
    "factor-identities",
    "product-convergence",
    "a-integral",
    "hp-growth",
)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tol: float

    @property
    def passed(self):
        return bool(self.residual <= self.tol)


def disk_points(rng, count, radius):
    r = radius * np.sqrt(rng.random(count))
    return r * np.exp(2j * np.pi * rng.random(count))


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def suite_t_identities(seed=0, count=1000):
    rng = np.random.default_rng(seed)
    z1, z2 = disk_points(rng, count, 0.95), disk_points(rng, count, 0.95)
    a, b = mobius_T(z1), mobius_T(z2)
    s = "t-identities"
    out = [
        Check(s, "T(T(z)) = 1/z", _rel(mobius_T(mobius_T(z1)) * z1, np.ones(count)), 1e-10),
        Check(s, "T^-1(T(z)) = z", _rel(mobius_T_inv(a), z1), 1e-10),
        Check(s, "product", _rel(mobius_T(z1 * z2), (a * b + a + b - 1) / (1 + a + b - a * b)), 1e-10),
    ]
    # the quotient and sum leave the disk; keep points away from the pole at i
    q = z2 / z1
    ok = np.abs(q - 1j) > 1e-3
    rhs = (a * b - a + b + 1) / (a * b + a - b + 1)
    out.append(Check(s, "quotient", _rel(mobius_T(q[ok]), rhs[ok]), 1e-10))
    w = z1 + z2
    ok = np.abs(w - 1j) > 1e-3
    rhs = (3 * a * b + 1j * a + 1j * b + 1) / (3j + a + b + 1j * a * b)
    out.append(Check(s, "addition", _rel(mobius_T(w[ok]), rhs[ok]), 1e-10))
    return out


def random_arc(rng, n=None):
    """Arc of measure in (0.02, 0.48), node-aligned when ``n`` is given."""
    m = rng.uniform(0.02, 0.48)
    beta = rng.uniform(0, 2 * np.pi)
    if n is not None:
        h = 2 * np.pi / n
        beta = h * round(beta / h)
        alpha = beta + h * max(1, round(2 * np.pi * m / h))
        return beta, alpha
    return beta, beta + 2 * np.pi * m


def suite_cayley_identities(seed=0, n=4096):
    rng = np.random.default_rng(seed)
    s = "cayley-identities"
    z = disk_points(rng, 200, 0.9)
    worst = dict(herglotz=0.0, at0=0.0, zero=0.0, at_zero=0.0, complement=0.0, lattice=0.0)
    for _ in range(20):
        beta, alpha = random_arc(rng, n)
        E = ArcSet.from_arcs([(beta, alpha)])
        chi = arc_indicator_grid([(beta, alpha)], n)
        worst["herglotz"] = max(worst["herglotz"], _rel(np.exp(1j * np.pi * herglotz_extend(chi, z)), cayley_eval(E, z)))
        worst["at0"] = max(worst["at0"], abs(cayley_eval(E, 0.0) - np.exp(1j * np.pi * E.measure)))
        if E.measure < 0.5:
            zE = circular_arc_zero(beta, alpha)
            phi = phi_from_arcset(E)
            worst["zero"] = max(worst["zero"], min(abs(zE - a) for a in phi.disk_zeros()))
            worst["at_zero"] = max(worst["at_zero"], abs(cayley_eval(E, zE) - 1j))
        worst["complement"] = max(worst["complement"], _rel(cayley_eval(E, z) * cayley_eval(E.complement(), z), -np.ones_like(z)))
        b2, a2 = random_arc(rng)
        F = ArcSet.from_arcs([(b2, a2)])
        lhs = cayley_eval(E, z) * cayley_eval(F, z)
        rhs = cayley_eval(E.intersect(F), z) * cayley_eval(E.union(F), z)
        worst["lattice"] = max(worst["lattice"], _rel(lhs, rhs))
    tols = dict(herglotz=1e-8, at0=1e-12, zero=1e-9, at_zero=1e-9, complement=1e-9, lattice=1e-9)
    return [Check(s, k, v, tols[k]) for k, v in worst.items()]


def suite_factor_identities(seed=0):
    rng = np.random.default_rng(seed)
    s = "factor-identities"
    z = disk_points(rng, 200, 0.9)
    out = []
    jav = javad().function
    th = 2 * np.pi * (np.arange(512) + 0.5) / 512
    th = th[(np.abs(np.sin(th)) > 1e-3)]
    out.append(Check(s, "javad boundary", _rel(jav(np.exp(1j * th)), -0.75 / np.sin(th)), 1e-10))
    pair = helson_decompose(jav)
    out.append(Check(s, "helson reconstruction", _rel(pair.reconstruct(z), jav(z)), 1e-9))
    for ex in (jav, halfplane().function, koebe_identity().function, koebe_singular().function):
        K, R = koebe_factor(ex)
        out.append(Check(s, "koebe reconstruction", _rel(K(z) * R(z), ex(z)), 1e-9))
    for ex in (koebe_identity().function, koebe_singular().function):
        g1, g2 = sum_of_squares(ex)
        out.append(Check(s, "sum of squares", _rel(g1(z) ** 2 + g2(z) ** 2, ex(z)), 1e-8))
    return out


def suite_product_convergence(seed=0):
    s = "product-convergence"
    out = []
    geo = InnerSequence.from_descriptor({"family": "geometric-arcs", "ratio": 0.5})
    v = unilateral_verdict(geo)
    out.append(Check(s, "geometric arcs converge", 0.0 if v.status == "converges" else 1.0, 0.0))
    res = unilateral_eval(geo, 0.0, 64)
    out.append(Check(s, "Cauchy increment at K=64", float(abs(res.trace[-1] - res.trace[-2])), 1e-8))
    out.append(Check(s, "arg value at 0 -> pi", abs(abs(np.angle(res.value)) - np.pi), 1e-6))
    harm = InnerSequence.from_descriptor({"family": "harmonic-arcs"})
    out.append(Check(s, "harmonic arcs diverge", 0.0 if unilateral_verdict(harm).status == "diverges" else 1.0, 0.0))
    families = {
        "theta": {"family": "rotations", "decay": "power", "exponent": 1.0},
        "powers": {"family": "powers", "k": 1},
        "blaschke": {"family": "blaschke-zeros", "decay": "power", "exponent": 1.0},
        "singular-mass": {"family": "atoms", "decay": "power", "exponent": 1.0},
    }
    for tag, desc in families.items():
        got = unilateral_verdict(InnerSequence.from_descriptor(desc)).failing
        out.append(Check(s, f"failing tag {tag}", 0.0 if got == tag else 1.0, 0.0))
    rng = np.random.default_rng(seed)
    z = disk_points(rng, 5, 0.7)
    zs = InnerSequence.from_descriptor({"family": "blaschke-zeros", "decay": "geometric", "ratio": 0.5})
    far = unilateral_eval(zs, z, 256).value
    near = unilateral_eval(zs, z, 20)
    out.append(Check(s, "tail bound holds", float(np.max(np.abs(far - near.value) - near.tail_bound)), 0.0))
    return out


def staircase(alphas, n):
    """Odd integer step grid: sum over k of chi[0, alpha_k) - chi[-alpha_k, 0)."""
    k = np.zeros(n)
    for a in alphas:
        m = int(round(a / (2 * np.pi) * n))
        k[:m] += 1
        k[n - m :] -= 1
    return k


def suite_a_integral(seed=0, n=4096):
    s = "a-integral"
    rng = np.random.default_rng(seed)
    z = disk_points(rng, 5, 0.8)
    th = 2 * np.pi * np.arange(n) / n
    v = BoundaryGrid(np.cos(th) + 0.3 * np.sin(3 * th) + 0.2)
    res = herglotz_a_integral(v, z)
    out = [Check(s, "bounded v = Herglotz", _rel(res.value, 1j * herglotz_extend(v, z)), 1e-10)]
    k = staircase([np.pi / (j + 1) for j in range(1, 17)], n)
    res = herglotz_a_integral(BoundaryGrid(np.pi * k, step=True), z, TruncationLadder.dyadic(3, 14))
    prod = bilateral_eval(bilateral_split(k), z).value
    out.append(Check(s, "staircase vs bilateral product", _rel(np.exp(res.value), prod), 1e-5))
    inc = res.increments
    out.append(Check(s, "ladder increments nonincreasing", float(max(0.0, np.max(np.diff(inc)))), 0.0))
    chi = arc_indicator_grid([(0.3, 2.1)], n)
    h = BoundaryGrid(np.pi * (-conjugate(chi).values + 1j * (chi.values - chi.values.mean())))
    worst = max(c.lhs - c.rhs for c in (hfs1_certificate(h, A) for A in TruncationLadder()))
    out.append(Check(s, "HFS1 certificate", max(0.0, worst), 1e-8))
    cot = BoundaryGrid(np.where(np.arange(n) == 0, 0.0, 1.0 / np.tan(np.where(th == 0, 1.0, th / 2))))
    out.append(Check(s, "cot rejected", 0.0 if weak_decay_test(distribution(cot)) == "non-member" else 1.0, 0.0))
    return out


def suite_hp_growth(seed=0):
    s = "hp-growth"
    inv = lambda z: 1.0 / (1.0 - z)
    Tphi = cayley_singular().expr
    Kphi = koebe_singular().expr
    cases = [
        ("1/(1-z), p=0.5", inv, 0.5, "bounded"),
        ("T(phi), p=0.3", Tphi, 0.3, "bounded"),
        ("T(phi), p=0.9", Tphi, 0.9, "bounded"),
        ("K(phi), p=0.4", Kphi, 0.4, "bounded"),
        ("1/(1-z), p=1", inv, 1.0, "divergent"),
        ("K(phi), p=0.6", Kphi, 0.6, "divergent"),
        ("T(z), p=1", mobius_T, 1.0, "divergent"),
    ]
    return [
        Check(s, f"{name} {want}", 0.0 if membership_trend(e, p).verdict == want else 1.0, 0.0)
        for name, e, p, want in cases
    ]


_RUNNERS = {
    "t-identities": suite_t_identities,
    "cayley-identities": suite_cayley_identities,
    "factor-identities": suite_factor_identities,
    "product-convergence": suite_product_convergence,
    "a-integral": suite_a_integral,
    "hp-growth": suite_hp_growth,
}


def run_suite(name, seed=0):
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClosedFormFallback)
        return _RUNNERS[name](seed)
