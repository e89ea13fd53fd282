"""Exception types raised by the library.

All of them derive from ``ValueError`` or ``ArithmeticError`` so that callers
who do not care about the distinction can catch the builtin.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(ValueError):
    """The boundary system for the map coefficients has no solution."""


class NoCriticalClassError(ValueError):
    """No rotationally symmetric critical class exists for this conformal modulus."""


class RangeError(ValueError):
    """The requested value lies beyond the supported inversion range."""


class ResolutionError(ValueError):
    """Too few quadrature or grid points were requested."""


class DefinitenessError(ArithmeticError):
    """A mass matrix or density failed to be positive definite."""


class InconsistentInputError(ValueError):
    """A map does not satisfy the crossing identity it claims to satisfy."""


class ConvergenceError(ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


class DensityPositivityError(ArithmeticError):
    """A free boundary map produced a nonpositive boundary density."""
