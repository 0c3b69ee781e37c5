import math

import numpy as np
import pytest
from scipy import integrate

from smirnov.boundary import (
    BoundaryGrid,
    arc_indicator_grid,
    conj_poisson_extend,
    conjugate,
    distribution,
    empirical_sigma,
    fourier_coeffs,
    grid_nodes,
    herglotz_extend,
    level_set_measure,
    poisson_extend,
    quadrature_error_bound,
    sample_grid,
    weak_decay_test,
    winding_number,
)
from smirnov.errors import GridResolutionError, NonRealBoundaryError

N = 1024


def theta(n=N):
    return 2 * np.pi * np.arange(n) / n


def arc_conjugate(t, beta, alpha):
    """Closed-form conjugate of the indicator of [beta, alpha)."""
    return np.log(np.abs(np.sin((t - beta) / 2)) / np.abs(np.sin((t - alpha) / 2))) / np.pi


class TestGrid:
    def test_size_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            BoundaryGrid(np.zeros(100))
        with pytest.raises(ValueError):
            BoundaryGrid(np.zeros(32))

    def test_values_are_read_only(self):
        g = BoundaryGrid(np.zeros(64))
        with pytest.raises(ValueError):
            g.values[0] = 1.0

    def test_arithmetic_and_mean(self):
        g = BoundaryGrid(np.ones(64)) * 3 + 1
        assert g.mean() == pytest.approx(4.0)
        assert (-g).mean() == pytest.approx(-4.0)
        assert g.remove_mean().mean() == pytest.approx(0.0)

    def test_real_values_rejects_complex(self):
        with pytest.raises(NonRealBoundaryError):
            BoundaryGrid(np.full(64, 1j)).real_values()

    def test_nodes(self):
        assert np.allclose(np.abs(grid_nodes(128)), 1.0)
        assert grid_nodes(128)[0] == 1.0

    def test_arc_indicator_half_open(self):
        g = arc_indicator_grid([(0.0, 2 * np.pi * 16 / 64)], 64)
        assert g.step
        assert g.values.sum() == 16
        assert g.values[0] == 1 and g.values[16] == 0


class TestFourier:
    def test_sampled_trig_polynomial(self):
        t = theta()
        g = BoundaryGrid(np.cos(3 * t) + 2 * np.sin(t))
        c = fourier_coeffs(g, 5)
        assert c[3] == pytest.approx(0.5)
        assert c[-3] == pytest.approx(0.5)
        assert c[1] == pytest.approx(-1j)
        assert abs(c[2]) < 1e-14

    def test_step_coefficients_exact(self):
        # chi on [0, pi): coefficient k is (1 - e^{-i k pi})/(2 pi i k)
        g = arc_indicator_grid([(0.0, np.pi)], 256)
        c = fourier_coeffs(g, 7)
        for k in (1, 2, 3, -5):
            exact = (1 - np.exp(-1j * k * np.pi)) / (2j * np.pi * k)
            assert abs(c[k] - exact) < 1e-14
        assert c[0] == pytest.approx(0.5)

    def test_too_many_coefficients(self):
        with pytest.raises(ValueError):
            fourier_coeffs(BoundaryGrid(np.zeros(64)), 32)


class TestConjugate:
    def test_cos_to_sin(self):
        t = theta()
        out = conjugate(BoundaryGrid(np.cos(2 * t) + 5.0))
        assert np.max(np.abs(out.values - np.sin(2 * t))) < 1e-13
        assert out.mean_removed

    def test_step_arc_matches_closed_form(self):
        n = 4096
        beta, alpha = 2 * np.pi * 300 / n, 2 * np.pi * 1500 / n
        out = conjugate(arc_indicator_grid([(beta, alpha)], n))
        t = theta(n)
        far = (np.abs(np.angle(np.exp(1j * (t - beta)))) > 1e-2) & (np.abs(np.angle(np.exp(1j * (t - alpha)))) > 1e-2)
        assert np.max(np.abs(out.values[far] - arc_conjugate(t[far], beta, alpha))) < 1e-6

    def test_conjugate_twice_is_minus_identity_on_mean_zero(self):
        t = theta()
        g = BoundaryGrid(np.cos(t) + 0.3 * np.sin(5 * t))
        assert np.allclose(conjugate(conjugate(g)).values, -g.values, atol=1e-13)


class TestExtensions:
    def test_poisson_of_cos(self, disk_points):
        z = disk_points(50, 0.9)
        g = BoundaryGrid(np.cos(theta()))
        assert np.allclose(poisson_extend(g, z), z.real, atol=1e-13)
        assert np.allclose(conj_poisson_extend(g, z), z.imag, atol=1e-13)
        assert np.allclose(herglotz_extend(g, z), z, atol=1e-13)

    def test_step_herglotz_against_quadrature(self):
        beta, alpha = 0.7, 2.9
        g = arc_indicator_grid([(beta, alpha)], 4096)
        h = 2 * np.pi / 4096
        b, a = h * math.ceil(beta / h), h * math.ceil(alpha / h)
        z = 0.6 - 0.5j
        kern = lambda t, part: part((np.exp(1j * t) + z) / (np.exp(1j * t) - z)) / (2 * np.pi)
        re = integrate.quad(kern, b, a, args=(np.real,), epsabs=1e-14)[0]
        im = integrate.quad(kern, b, a, args=(np.imag,), epsabs=1e-14)[0]
        assert abs(herglotz_extend(g, z) - (re + 1j * im)) < 1e-12

    def test_step_grid_exact_close_to_boundary(self):
        g = BoundaryGrid(np.full(64, 1.0), step=True)
        assert poisson_extend(g, 0.9999) == pytest.approx(1.0, abs=1e-12)

    def test_sampled_grid_radius_guard(self):
        g = BoundaryGrid(np.ones(64))
        with pytest.raises(GridResolutionError):
            poisson_extend(g, 0.9995)
        with pytest.raises(GridResolutionError):
            poisson_extend(g, 1.0, tol=None)

    def test_tolerance_enforces_error_bound(self):
        g = BoundaryGrid(np.cos(theta(64)))
        assert quadrature_error_bound(g, 0.9) > 1e-6
        with pytest.raises(GridResolutionError):
            poisson_extend(g, 0.9, tol=1e-6)
        assert poisson_extend(g, 0.3, tol=1e-6) == pytest.approx(0.3)

    def test_sample_grid(self):
        g = sample_grid(lambda z: z.real, 128)
        assert g.values[0] == pytest.approx(1.0)


class TestDistribution:
    def test_counts(self):
        g = BoundaryGrid(np.arange(64.0))
        prof = distribution(g, [0.5, 10.0, 62.5])
        assert list(prof.counts) == [63, 53, 1]
        assert prof.rho[1] == pytest.approx(10 * 53 / 64)
        assert np.all(np.diff(prof.sigma) <= 0)

    def test_thresholds_validated(self):
        with pytest.raises(ValueError):
            distribution(BoundaryGrid(np.zeros(64)), [1.0, 0.5])

    def test_empirical_sigma_brute_force(self, rng):
        vals = np.abs(rng.standard_cauchy(256))
        g = BoundaryGrid(vals)
        A = 0.7
        ts = np.concatenate([[A], np.sort(vals)[np.sort(vals) > A] * (1 - 1e-12)])
        brute = max(t * np.mean(vals > t) for t in ts if t >= A)
        assert empirical_sigma(g, A) == pytest.approx(brute, rel=1e-9)

    def test_weak_decay_bounded_member(self):
        prof = distribution(BoundaryGrid(np.cos(theta(4096))))
        assert weak_decay_test(prof) == "member"

    def test_weak_decay_cot_non_member(self):
        t = theta(1 << 14)
        vals = np.zeros_like(t)
        vals[1:] = 1 / np.tan(t[1:] / 2)
        assert weak_decay_test(distribution(BoundaryGrid(vals))) == "non-member"

    def test_weak_decay_log_member(self):
        t = theta(1 << 14)
        vals = np.log(np.abs(2 * np.sin((t + 1e-9) / 2)))
        assert weak_decay_test(distribution(BoundaryGrid(vals))) == "member"


class TestLevelSetsAndWinding:
    def test_level_set_of_identity(self):
        assert level_set_measure(grid_nodes(1024)) == pytest.approx(0.5, abs=1e-12)

    def test_level_set_of_square(self):
        assert level_set_measure(grid_nodes(1024) ** 2) == pytest.approx(0.5, abs=1e-12)

    def test_level_set_of_constant(self):
        assert level_set_measure(np.full(256, -1 + 0j)) == 1.0

    def test_winding(self):
        assert winding_number(lambda z: z**3, 0.5) == 3
        assert winding_number(lambda z: 2 + z, 0.5) == 0
