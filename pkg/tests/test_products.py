import math

import numpy as np
import pytest

from smirnov.boundary import BoundaryGrid, arc_indicator_grid, winding_number
from smirnov.cayley import ArcSet, cayley_eval
from smirnov.disk import mobius_T
from smirnov.errors import DivergentProductError, NonIntegerError, NotRationalError
from smirnov.inner import InnerFunction, inner_eval
from smirnov.products import (
    Decay,
    InnerSequence,
    bilateral_eval,
    bilateral_split,
    cayley_sum_inner,
    odd_decreasing_split,
    product_tail_bound,
    quotient_deviation,
    unilateral_eval,
    unilateral_verdict,
)

GEOMETRIC_ARCS = {"family": "geometric-arcs", "ratio": 0.5}
HARMONIC_ARCS = {"family": "harmonic-arcs"}


class TestDecay:
    def test_tails(self):
        g = Decay("geometric", 1.0, 0.5)
        assert g.tail(3) == pytest.approx(sum(0.5 ** (n - 1) for n in range(4, 200)))
        p = Decay("power", 1.0, 2.0)
        assert p.tail(10) >= sum(n**-2.0 for n in range(11, 100000))
        assert Decay("power", 1.0, 1.0).tail(10) == math.inf
        assert not Decay("constant", 1.0).converges


class TestVerdict:
    def test_zeros_geometric_converge(self):
        s = InnerSequence.from_descriptor({"family": "blaschke-zeros", "decay": "geometric", "ratio": 0.5})
        # 1 - |a_n| = 2^-n
        assert s.term(3).zeros[0][0] == pytest.approx(1 - 2**-3)
        assert unilateral_verdict(s).status == "converges"

    def test_powers_diverge(self):
        v = unilateral_verdict(InnerSequence.from_descriptor({"family": "powers"}))
        assert (v.status, v.failing) == ("diverges", "powers")

    def test_geometric_arcs_converge(self):
        s = InnerSequence.from_descriptor(GEOMETRIC_ARCS)
        assert s.arcset(1).measure == pytest.approx(0.5)
        assert s.arcset(4).measure == pytest.approx(2**-4)
        assert unilateral_verdict(s).status == "converges"

    @pytest.mark.parametrize(
        "desc, tag",
        [
            ({"family": "rotations", "decay": "power", "exponent": 1.0}, "theta"),
            ({"family": "powers", "k": 2}, "powers"),
            ({"family": "blaschke-zeros", "decay": "power", "exponent": 1.0}, "blaschke"),
            ({"family": "atoms", "decay": "power", "exponent": 0.5}, "singular-mass"),
            (HARMONIC_ARCS, "blaschke"),
        ],
    )
    def test_failing_tags(self, desc, tag):
        v = unilateral_verdict(InnerSequence.from_descriptor(desc))
        assert v.status == "diverges" and v.failing == tag

    def test_partial_sum_traces(self):
        v = unilateral_verdict(InnerSequence.from_descriptor(HARMONIC_ARCS), K=256)
        tr = v.partial_sums["blaschke"]
        assert tr[-1] - tr[63] == pytest.approx(0.5 * sum(1 / n for n in range(65, 257)))

    def test_finite_sequence(self):
        s = InnerSequence.from_terms([InnerFunction.monomial(1)] * 3)
        v = unilateral_verdict(s)
        assert v.status == "converges" and v.basis == "finite"

    def test_empirical_capped(self):
        s = InnerSequence(term=lambda n: InnerFunction.blaschke([1 - 2.0**-n]))
        v = unilateral_verdict(s, K=40)
        assert v.status == "inconclusive" and v.basis == "empirical"
        with pytest.raises(DivergentProductError):
            unilateral_eval(s, 0.1, 40)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            InnerSequence.from_descriptor({"family": "nope"})


class TestUnilateral:
    def test_single_term(self, disk_points):
        I = InnerFunction(1j, 1, ((0.3 - 0.5j, 1),))
        z = disk_points(20)
        res = unilateral_eval(InnerSequence.from_terms([I]), z)
        assert np.allclose(res.value, mobius_T(inner_eval(I, z)), atol=1e-15)
        assert np.all(res.tail_bound == 0)

    def test_argument_at_zero(self):
        s = InnerSequence.from_descriptor(GEOMETRIC_ARCS)
        for K in (1, 3, 10):
            res = unilateral_eval(s, 0.0, K)
            total = sum(2.0**-n for n in range(1, K + 1))
            assert np.exp(1j * np.pi * total) == pytest.approx(res.value, abs=1e-12)

    def test_tail_bound_decreases(self):
        s = InnerSequence.from_descriptor(GEOMETRIC_ARCS)
        bounds = [unilateral_eval(s, 0.4 + 0.2j, K).tail_bound for K in range(4, 40, 4)]
        assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))

    @pytest.mark.parametrize(
        "desc",
        [
            GEOMETRIC_ARCS,
            {"family": "arcs", "decay": "power", "exponent": 2.0, "scale": 0.3},
            {"family": "blaschke-zeros", "decay": "geometric", "ratio": 0.7, "scale": 0.5, "angle": "golden"},
            {"family": "rotations", "decay": "power", "exponent": 2.0, "scale": 0.5},
            {"family": "atoms", "decay": "geometric", "ratio": 0.6, "scale": 0.5},
        ],
    )
    def test_tail_bound_valid(self, desc, disk_points):
        s = InnerSequence.from_descriptor(desc)
        z = disk_points(8, 0.7)
        far = unilateral_eval(s, z, 512).value
        for K in (8, 16, 32):
            res = unilateral_eval(s, z, K)
            assert np.all(np.abs(far - res.value) <= res.tail_bound + 1e-14)

    def test_cauchy_stabilization_equivalence(self):
        conv = unilateral_eval(InnerSequence.from_descriptor(GEOMETRIC_ARCS), 0.2j, 64).trace
        assert abs(conv[-1] - conv[-2]) < 1e-8
        div = unilateral_eval(InnerSequence.from_descriptor(HARMONIC_ARCS), 0.2j, 64, require_verdict=False).trace
        assert abs(div[63] - div[31]) > 0.1
        with pytest.raises(DivergentProductError):
            unilateral_eval(InnerSequence.from_descriptor(HARMONIC_ARCS), 0.2j, 64)

    def test_tail_bound_infinite_when_terms_large(self):
        b, _ = product_tail_bound(1.0, 0.99, 1.0, 0.5)
        assert b == math.inf

    def test_product_preserve_identity(self):
        # |1 - T(w)| = sqrt2 |1 - w| / |1 + i w|: summability transfers both ways
        n = np.arange(1, 2000)
        w = 1 - (0.3 + 0.4j) / n**2
        lhs = np.abs(1 - mobius_T(w))
        assert np.allclose(lhs, math.sqrt(2) * np.abs(1 - w) / np.abs(1 + 1j * w), rtol=1e-12)
        ratio = lhs / np.abs(1 - w)
        assert 0.5 < ratio.min() and ratio.max() < 2.0
        assert ratio[-1] == pytest.approx(1.0, abs=1e-6)


class TestBilateral:
    def test_split_two_arcs(self):
        n = 256
        v = arc_indicator_grid([(0.5, 1.5)], n) - arc_indicator_grid([(3.0, 4.0)], n)
        split = bilateral_split(v)
        assert len(split.plus) == 1 and len(split.minus) == 1
        assert split.plus[0].contains(1.0) and split.minus[0].contains(3.5)

    def test_two_arc_product_closed_form(self, disk_points):
        n = 512
        h = 2 * np.pi / n
        A, B = (40 * h, 120 * h), (300 * h, 330 * h)
        v = arc_indicator_grid([A], n) - arc_indicator_grid([B], n)
        z = disk_points(30)
        res = bilateral_eval(bilateral_split(v), z)
        expected = cayley_eval(ArcSet.from_arcs([A]), z) / cayley_eval(ArcSet.from_arcs([B]), z)
        assert np.allclose(res.value, expected, atol=1e-10)

    def test_zero_data(self):
        split = bilateral_split(np.zeros(64))
        assert split.plus == () and split.minus == ()
        assert bilateral_eval(split, 0.3).value == 1

    def test_non_integer(self):
        with pytest.raises(NonIntegerError):
            bilateral_split(np.full(64, 0.5))

    def test_symmetric_split_diagnostic_vanishes(self):
        res = bilateral_eval(odd_decreasing_split([1.0, 0.5, 0.25]), 0.2)
        assert res.abs_sum == 0
        assert len(res.abs_trace) == 3

    def test_odd_split_arcs(self):
        split = odd_decreasing_split([1.0, 0.5])
        assert split.plus[0].contains(0.5) and split.minus[0].contains(2 * np.pi - 0.5)
        with pytest.raises(ValueError):
            odd_decreasing_split([0.5, 1.0])

    def test_matches_outer_construction(self, disk_points):
        n = 1024
        k = np.zeros(n)
        k[10:300] += 1
        k[50:100] += 1
        k[600:900] -= 1
        from smirnov.outer import outer_from_argument

        F = outer_from_argument(BoundaryGrid(np.pi * k, step=True))
        z = disk_points(40)
        assert np.allclose(bilateral_eval(bilateral_split(k), z).value, F(z), atol=1e-10)


class TestIdentities:
    def test_quotient_deviation_identity(self, rng):
        for _ in range(10):
            a = 0.8 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2))
            p, m = InnerFunction.blaschke([a[0]]), InnerFunction.blaschke([a[1]])
            res = quotient_deviation(p, m, 0.4)
            assert res.identity_residual < 1e-12
            assert abs(res.value) <= res.bound * (1 + 1e-12)

    def test_quotient_deviation_equal(self):
        p = InnerFunction.blaschke([0.2 + 0.3j])
        assert quotient_deviation(p, p, 0.4).value == 0

    def test_cayley_sum_of_constants(self):
        phi = cayley_sum_inner(InnerFunction.constant(1.0), InnerFunction.constant(1.0))
        assert phi.is_constant
        assert phi.xi == pytest.approx((4 + 3j) / 5)

    def test_cayley_sum_of_identity(self, disk_points):
        z = disk_points(50)
        Z = InnerFunction.monomial(1)
        phi = cayley_sum_inner(Z, Z)
        assert np.allclose(mobius_T(phi(z)), 2 * mobius_T(z), atol=1e-10)
        # (3iz - 1)/(z + 3i) after cancelling the common root
        assert np.allclose(phi(z), (3j * z - 1) / (z + 3j), atol=1e-12)

    def test_cayley_sum_denominator_zero_free(self):
        Z, B = InnerFunction.monomial(1), InnerFunction.blaschke([0.5j, -0.3])
        fn = lambda w: 3 + 1j * Z(w) + 1j * B(w) + Z(w) * B(w)
        assert winding_number(fn, 0.95) == 0

    def test_cayley_sum_needs_rational(self):
        with pytest.raises(NotRationalError):
            cayley_sum_inner(InnerFunction.atomic(1.0), InnerFunction.monomial(1))
