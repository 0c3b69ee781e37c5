import math

import pytest
from scipy.special import ellipk

from smirnov.catalog import cayley_singular, halfplane, javad, koebe_singular
from smirnov.disk import constant, inner_leaf, quotient
from smirnov.errors import PoleError
from smirnov.hp import classify_trend, grid_size_for_radius, hp_mean, membership_trend
from smirnov.inner import InnerFunction


def inv_one_minus(z):
    return 1.0 / (1.0 - z)


def m1_exact(r):
    """(1/2pi) integral |1 - r e^{it}|^-1 dt = (2/pi) K(m)/(1 + r), m = 4r/(1+r)^2."""
    return 2.0 / math.pi * ellipk(4 * r / (1 + r) ** 2) / (1 + r)


def test_constant_mean():
    for r in (0.1, 0.9, 0.9999):
        assert hp_mean(constant(-3.0), 0.5, r) == pytest.approx(3.0**0.5)


@pytest.mark.parametrize("r", [0.5, 0.9, 0.99, 0.999])
def test_elliptic_oracle(r):
    assert hp_mean(inv_one_minus, 1.0, r) == pytest.approx(m1_exact(r), rel=1e-10)


def test_logarithmic_growth_rate():
    means = [hp_mean(inv_one_minus, 1.0, r) for r in (0.99, 0.999, 0.9999)]
    slope = math.log(10) / math.pi  # growth per decade of 1/(1 - r)
    for a, b in zip(means, means[1:]):
        assert (b - a) == pytest.approx(slope, rel=0.2)


@pytest.mark.parametrize(
    "e, p",
    [
        (inv_one_minus, 0.5),
        (halfplane().expr, 0.7),
        (javad().expr, 0.5),
        (koebe_singular().expr, 0.4),
        (cayley_singular().expr, 0.9),
    ],
)
def test_monotone_in_radius(e, p):
    means = [hp_mean(e, p, r) for r in (0.3, 0.6, 0.9, 0.99, 0.999)]
    assert all(b >= a - 1e-10 for a, b in zip(means, means[1:]))


def test_nesting():
    e = cayley_singular().expr
    assert membership_trend(e, 0.9).verdict == "bounded"
    for p in (0.3, 0.6):
        assert membership_trend(e, p).verdict == "bounded"


def test_verdicts():
    assert membership_trend(inv_one_minus, 0.5).verdict == "bounded"
    rep = membership_trend(inv_one_minus, 1.0)
    assert rep.verdict == "divergent" and len(rep.means) == 4


def test_validation():
    with pytest.raises(ValueError):
        hp_mean(inv_one_minus, 5.0, 0.5)
    with pytest.raises(ValueError):
        hp_mean(inv_one_minus, 1.0, 0.99999)
    with pytest.raises(ValueError):
        membership_trend(inv_one_minus, 1.0, radii=(0.9, 0.99))


def test_pole_on_circle():
    e = quotient(constant(1.0), inner_leaf(InnerFunction.blaschke([0.5])))
    with pytest.raises(PoleError):
        hp_mean(e, 1.0, 0.5)


def test_classify_synthetic():
    assert classify_trend([1.0, 1.0, 1.0, 1.0])[0] == "bounded"
    assert classify_trend([1.0, 2.0, 3.0, 4.0])[0] == "divergent"
    assert classify_trend([1.0, 2.0, 2.5, 2.75])[0] == "bounded"
    assert classify_trend([1.0, 2.0, 3.0, 3.92])[0] == "inconclusive"


def test_grid_size():
    assert grid_size_for_radius(0.5) == 4096
    assert grid_size_for_radius(0.9999) == 1 << 21
