"""Numerical toolkit for real Smirnov functions on the unit disk.

Submodules: ``disk`` (Mobius maps and expression trees), ``boundary``
(circle grids, conjugation, kernel extensions, distributions), ``inner``,
``outer``, ``cayley`` (Cayley inner functions of arc sets),
``factorization``, ``products``, ``a_integral``, ``hp`` and ``cli``.
"""

__version__ = "0.1.0"

from smirnov.kernels import BACKEND

__all__ = ["__version__", "BACKEND"]
