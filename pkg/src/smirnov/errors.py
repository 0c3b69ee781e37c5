"""Exception types raised by the toolkit."""


class SmirnovError(Exception):
    """Base class for all toolkit errors."""


class PoleError(SmirnovError, ZeroDivisionError):
    """Evaluation point lies within the pole tolerance of a singularity."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class GridResolutionError(SmirnovError, ValueError):
    """Point too close to the circle for the grid quadrature to be trusted."""


class NotInnerError(SmirnovError, ValueError):
    """A candidate inner function is not unimodular on the circle."""


class PoleInsideDiskError(SmirnovError, ValueError):
    """A rational function has a pole inside the open disk."""


class ArcMeasureError(SmirnovError, ValueError):
    """Closed-form inner function requested for an unsupported arc set."""


class NonIntegerError(SmirnovError, ValueError):
    """Level-set decomposition requested for non-integer samples."""


class NegativityError(SmirnovError, ValueError):
    """A function required to be nonnegative on the circle is not."""


class DivergentProductError(SmirnovError, ValueError):
    """Infinite product evaluation requested without a convergence verdict."""


class NotWeakL1Error(SmirnovError, ValueError):
    """Function fails the weak-type decay test t*lambda(t) -> 0."""


class NotRationalError(SmirnovError, TypeError):
    """Operation needs rational data but got something else."""


class NonRealBoundaryError(SmirnovError, ValueError):
    """Boundary values expected to be real are not."""
