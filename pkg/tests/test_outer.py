import math

import numpy as np
import pytest

from smirnov.boundary import BoundaryGrid, arc_indicator_grid, grid_nodes
from smirnov.cayley import ArcSet, cayley_eval
from smirnov.errors import PoleError
from smirnov.inner import InnerFunction
from smirnov.outer import (
    AnalyticFactor,
    constant_outer,
    log_abs_one_minus,
    outer_boundary,
    outer_eval,
    outer_from_argument,
    outer_from_factors,
    outer_from_logmod,
    outer_multiply,
    outer_scale,
    outer_sqrt,
)

Z = InnerFunction.monomial(1)


def test_log_abs_one_minus_singular_node_rule():
    n = 1024
    w = log_abs_one_minus(Z, 1.0, n)
    # neighbour mean minus log(2 pi) equals -log n up to O(n^-2)
    assert w[0] == pytest.approx(-math.log(n), abs=1e-5)
    assert abs(w.mean()) < 1e-8  # integral of log|1 - zeta| vanishes


def test_quadrature_reproduces_one_minus_z(disk_points):
    z = disk_points(60, 0.9)
    F = outer_from_logmod(log_abs_one_minus(Z, 1.0, 4096))
    assert np.max(np.abs(outer_eval(F, z) - (1 - z))) < 1e-7


def test_analytic_route_is_exact_on_closed_disk():
    F = outer_from_factors([(Z, 1.0, 1.0)], n=256)
    z = np.array([0.3j, -1.0, np.exp(2.0j)])
    assert np.allclose(F(z), 1 - z, atol=1e-15)


def test_negative_power_pole():
    F = outer_from_factors([(Z, 1.0, -1.0)], n=256)
    with pytest.raises(PoleError):
        F(1.0)


def test_gamma_sets_argument_at_zero():
    F = outer_from_factors([(Z.scaled(-1), 0.5, 2.0)], scale=3.0, gamma=0.7, n=256)
    v = F.value_at_zero()
    assert np.angle(v) == pytest.approx(0.7)
    assert abs(v) == pytest.approx(3.0)


def test_logmod_mean_is_log_modulus_at_zero():
    F = outer_from_factors([(InnerFunction.blaschke([0.4j]), 0.9, -1.5)], scale=2.0, n=2048)
    assert F.logmod.mean() == pytest.approx(math.log(abs(F.value_at_zero())), abs=1e-10)


def test_argument_route_reproduces_cayley_arc():
    n = 2048
    arc = (2 * np.pi * 100 / n, 2 * np.pi * 700 / n)
    F = outer_from_argument(arc_indicator_grid([arc], n) * np.pi)
    z = np.array([0.2, -0.5 + 0.5j, 0.85j])
    assert np.allclose(F(z), cayley_eval(ArcSet.from_arcs([arc]), z), atol=1e-13)


def test_sqrt_multiply_scale(disk_points):
    z = disk_points(40, 0.8)
    F = outer_from_factors([(Z, 1.0, -2.0)], scale=4.0, gamma=math.pi, n=512)
    G = outer_sqrt(F)
    assert np.allclose(G(z) ** 2, F(z), atol=1e-12)
    assert np.allclose(outer_multiply(F, G)(z), F(z) * G(z), atol=1e-12)
    assert np.allclose(outer_scale(F, 2j)(z), 2j * F(z), atol=1e-12)
    assert np.allclose(F.sqrt()(z), G(z))


def test_constant_outer():
    c = constant_outer(-2.0, 64)
    assert c(0.5) == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        constant_outer(0.0)


def test_boundary_values():
    F = outer_from_factors([(Z, 0.5, 1.0)], n=256)
    b = outer_boundary(F)
    assert np.max(np.abs(b.values - (1 - 0.5 * grid_nodes(256)))) < 1e-12


def test_factor_validation():
    with pytest.raises(ValueError):
        AnalyticFactor(Z, 1.5, 1.0)
    with pytest.raises(ValueError):
        AnalyticFactor(InnerFunction.constant(1.0), 1.0, 1.0)
    with pytest.raises(ValueError):
        outer_from_logmod(BoundaryGrid(np.full(64, np.inf)))
