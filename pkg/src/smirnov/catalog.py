"""Named worked examples with exact inner-outer data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smirnov.disk import FunctionExpr, apply_K, apply_T, inner_leaf
from smirnov.factorization import RealSmirnovFn
from smirnov.inner import InnerFunction
from smirnov.outer import outer_from_factors

NAMES = ("javad", "halfplane", "koebe-identity", "koebe-singular", "cayley-singular")


@dataclass(frozen=True, eq=False)
class NamedExample:
    name: str
    function: RealSmirnovFn
    expr: FunctionExpr
    description: str


def atomic_phi(rho=1.0):
    """phi_rho(z) = exp(rho (z + 1)/(z - 1)), one atom of mass rho at 1."""
    return InnerFunction.atomic(rho, 1.0)


def javad(n=None):
    """3iz/(2 - 2z^2) = z * (3i/2) (1 - z)^-1 (1 + z)^-1; boundary values -(3/4) csc(theta)."""
    z = InnerFunction.monomial(1)
    F = outer_from_factors([(z, 1.0, -1.0), (z.scaled(-1.0), 1.0, -1.0)], 1.5, math.pi / 2, n)
    f = RealSmirnovFn(z, F, (np.array([0, 3j]), np.array([2.0, 0, -2.0])))
    return NamedExample("javad", f, f.expr, "3iz/(2 - 2z^2)")


def halfplane(n=None):
    """T(z) = i(1 + z)/(1 - z), an outer function onto the upper half plane."""
    z = InnerFunction.monomial(1)
    F = outer_from_factors([(z.scaled(-1.0), 1.0, 1.0), (z, 1.0, -1.0)], 1.0, math.pi / 2, n)
    f = RealSmirnovFn(InnerFunction.constant(1.0), F, (np.array([1j, 1j]), np.array([1.0, -1.0])))
    return NamedExample("halfplane", f, f.expr, "i(1 + z)/(1 - z)")


def koebe_identity(n=None):
    """K(z) = -4z/(1 - z)^2."""
    z = InnerFunction.monomial(1)
    F = outer_from_factors([(z, 1.0, -2.0)], 4.0, math.pi, n)
    f = RealSmirnovFn(z, F, (np.array([0, -4.0 + 0j]), np.array([1.0, -2.0, 1.0])))
    return NamedExample("koebe-identity", f, apply_K(inner_leaf(z)), "-4z/(1 - z)^2")


def koebe_singular(rho=1.0, n=None):
    """K(phi_rho) = -4 phi/(1 - phi)^2 with the atomic inner phi_rho."""
    phi = atomic_phi(rho)
    F = outer_from_factors([(phi, 1.0, -2.0)], 4.0, math.pi, n)
    f = RealSmirnovFn(phi, F)
    return NamedExample("koebe-singular", f, apply_K(inner_leaf(phi)), f"K(phi_rho), rho = {rho:g}")


def cayley_singular(rho=1.0, n=None):
    """T(phi_rho) = i(1 - i phi)/(1 + i phi), outer."""
    phi = atomic_phi(rho)
    F = outer_from_factors([(phi.scaled(1j), 1.0, 1.0), (phi.scaled(-1j), 1.0, -1.0)], 1.0, math.pi / 2, n)
    f = RealSmirnovFn(InnerFunction.constant(1.0), F)
    return NamedExample("cayley-singular", f, apply_T(inner_leaf(phi)), f"T(phi_rho), rho = {rho:g}")


def named_example(name, rho=1.0, n=None):
    builders = {
        "javad": lambda: javad(n),
        "halfplane": lambda: halfplane(n),
        "koebe-identity": lambda: koebe_identity(n),
        "koebe-singular": lambda: koebe_singular(rho, n),
        "cayley-singular": lambda: cayley_singular(rho, n),
    }
    if name not in builders:
        raise ValueError(f"unknown named example {name!r}; choose from {', '.join(NAMES)}")
    return builders[name]()
