"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class MomentsError(Exception):
    """Base class for all errors raised by :mod:`dirac_moments`."""


class InvalidState(MomentsError, ValueError):
    """Quantum numbers or couplings that do not describe a bound state."""


class OutOfRange(MomentsError, ValueError):
    """A power or degree outside the validity range of a formula."""


class DegenerateDenominator(MomentsError, ZeroDivisionError):
    """A denominator vanished (or came within tolerance of zero)."""


class DivergentIntegral(MomentsError, ValueError):
    """The radial integral does not converge at the origin for this power."""


class QuadratureNonConvergence(MomentsError, ArithmeticError):
    """Successive quadrature refinements failed to agree."""


class SingularMatrix(MomentsError, ArithmeticError):
    """A matrix needed for a factorization is (numerically) singular."""


class DegenerateCombination(MomentsError, ValueError):
    """A linear combination of recurrences with vanishing total weight."""


class IdentityViolation(MomentsError, AssertionError):
    """An algebraic identity failed to hold within tolerance.

    ``residual`` carries the offending relative residual so harness code can
    report it.
    """

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual
