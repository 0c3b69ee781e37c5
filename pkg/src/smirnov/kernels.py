"""Backend selection for the grid kernel sums.

The compiled extension is used when it imports; setting the environment
variable ``SMIRNOV_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

import numpy as np

from smirnov import _kernels_py

if os.environ.get("SMIRNOV_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from smirnov import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _prep(g, z):
    g = np.ascontiguousarray(g, dtype=np.complex128)
    z = np.ascontiguousarray(np.ravel(z), dtype=np.complex128)
    return g, z


def trapezoid_sums(g, z):
    """Trapezoid sums of ``g`` against the Poisson and conjugate Poisson kernels.

    Returns two complex arrays ``(P, Q)`` over the flattened points ``z``.
    """
    return _impl.trapezoid_sums(*_prep(g, z))


def step_sums(g, z):
    """Exact integrals of the cellwise-constant ``g`` against both kernels."""
    return _impl.step_sums(*_prep(g, z))


def blaschke_product(zeros, z):
    """Normalized Blaschke product over ``zeros`` (repeated for multiplicity)."""
    zeros = np.ascontiguousarray(np.ravel(zeros), dtype=np.complex128)
    z = np.ascontiguousarray(np.ravel(z), dtype=np.complex128)
    return _impl.blaschke_product(zeros, z)
