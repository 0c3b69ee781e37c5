import numpy as np
import pytest

from smirnov.a_integral import (
    TruncationLadder,
    a_integral,
    clamp,
    herglotz_a_integral,
    hfs1_certificate,
)
from smirnov.boundary import BoundaryGrid, arc_indicator_grid, conjugate, grid_nodes, herglotz_extend
from smirnov.cayley import ArcSet, cayley_eval
from smirnov.errors import NotWeakL1Error
from smirnov.products import bilateral_eval, bilateral_split

N = 4096
H = 2 * np.pi / N


def arc_h(beta_idx, alpha_idx, n=N):
    """pi(-conj(chi_E) + i(chi_E - m(E))) for a node-aligned arc."""
    chi = arc_indicator_grid([(beta_idx * 2 * np.pi / n, alpha_idx * 2 * np.pi / n)], n)
    return BoundaryGrid(np.pi * (-conjugate(chi).values + 1j * (chi.values - chi.values.mean())))


def odd_staircase(alphas, n=N):
    k = np.zeros(n)
    for a in alphas:
        m = int(round(a / (2 * np.pi) * n))
        k[:m] += 1
        k[n - m :] -= 1
    return k


class TestLadder:
    def test_default(self):
        lad = TruncationLadder()
        assert len(lad) == 15 and lad.values[0] == 1.0 and lad.values[-1] == 2.0**14

    @pytest.mark.parametrize("vals", [(), (1.0, 1.0), (2.0, 1.0), (-1.0, 2.0)])
    def test_invalid(self, vals):
        with pytest.raises(ValueError):
            TruncationLadder(vals)

    def test_clamp_cases(self):
        assert list(clamp(np.array([-5.0, 0.5, 5.0]), 2.0)) == [-2.0, 0.5, 2.0]


class TestAIntegral:
    def test_bounded_equals_mean(self):
        t = 2 * np.pi * np.arange(N) / N
        h = BoundaryGrid(3 * np.cos(t) + 0.7)
        res = a_integral(h)
        assert res.value == pytest.approx(0.7, abs=1e-13)
        past = [v for A, v in zip(res.ladder, res.trace) if A > 3.7]
        assert np.allclose(past, h.mean(), atol=1e-15)

    def test_arc_data_equals_ordinary_integral(self):
        chi = arc_indicator_grid([(100 * H, 1300 * H)], N)
        h = BoundaryGrid(np.pi * (-conjugate(chi).values + 1j * chi.values))
        res = a_integral(h)
        assert abs(res.value - 1j * np.pi * 1200 / N) < 1e-6
        assert res.error < 1e-12

    def test_cot_rejected(self):
        t = 2 * np.pi * np.arange(1 << 14) / (1 << 14)
        vals = np.zeros_like(t)
        vals[1:] = 1 / np.tan(t[1:] / 2)
        with pytest.raises(NotWeakL1Error):
            a_integral(BoundaryGrid(vals))


class TestHerglotzA:
    def test_bounded_matches_classical(self, disk_points):
        t = 2 * np.pi * np.arange(N) / N
        v = BoundaryGrid(np.sin(t) - 0.4 * np.cos(2 * t) + 1.5)
        z = disk_points(30, 0.9)
        res = herglotz_a_integral(v, z)
        assert np.max(np.abs(res.value - 1j * herglotz_extend(v, z))) < 1e-12
        assert not res.flagged

    def test_reproduces_cayley(self, disk_points):
        arcs = [(10 * H, 900 * H), (2000 * H, 2100 * H)]
        v = arc_indicator_grid(arcs, N)
        z = disk_points(100, 0.9)
        res = herglotz_a_integral(v, z)
        assert np.max(np.abs(np.exp(np.pi * res.value) - cayley_eval(ArcSet.from_arcs(arcs), z))) < 1e-6

    def test_staircase_cross_oracle(self):
        k = odd_staircase([np.pi / (j + 1) for j in range(1, 25)])
        z = 0.3 + 0.2j
        res = herglotz_a_integral(BoundaryGrid(np.pi * k, step=True), z)
        assert abs(np.exp(res.value) - bilateral_eval(bilateral_split(k), z).value) < 1e-5

    def test_uniform_error_decreases(self, disk_points):
        k = odd_staircase([np.pi / (j + 1) for j in range(1, 33)])
        z = disk_points(100, 0.5)
        oracle = bilateral_eval(bilateral_split(k), z).value
        res = herglotz_a_integral(BoundaryGrid(np.pi * k, step=True), z)
        err = np.max(np.abs(np.exp(res.trace) - oracle), axis=1)
        assert np.all(np.diff(err) <= 1e-15)
        assert err[-1] < 1e-10

    def test_mean_restored(self):
        v = BoundaryGrid(np.full(64, 2.0))
        assert herglotz_a_integral(v, 0.3).value == pytest.approx(2j)


class TestHFS1:
    def test_zero(self):
        c = hfs1_certificate(BoundaryGrid(np.zeros(64)), 1.0)
        assert (c.lhs, c.rhs) == (0.0, 0.0) and c.passed

    def test_monomial(self):
        h = BoundaryGrid(grid_nodes(256))
        for A in (1.0, 2.0, 8.0):
            c = hfs1_certificate(h, A)
            assert c.lhs < 1e-14 and c.rhs >= 0 and c.passed

    def test_arc_along_ladder(self):
        h = arc_h(300, 1700)
        for A in TruncationLadder():
            c = hfs1_certificate(h, A)
            assert c.passed, (A, c)
            assert c.sigma_is_lower_bound

    def test_mean_must_vanish(self):
        with pytest.raises(ValueError):
            hfs1_certificate(BoundaryGrid(np.ones(64)), 1.0)
