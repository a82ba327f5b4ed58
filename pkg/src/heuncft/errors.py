"""Exception hierarchy.

Every failure that the verification pipelines can legitimately report is a
subclass of :class:`HeunCFTError`.  Errors that signal a broken invariant (as
opposed to bad user input) derive from :class:`InvariantViolation`; the CLI
maps those to exit status 3.
"""

from __future__ import annotations


class HeunCFTError(Exception):
    """Base class for all library errors."""


class InvariantViolation(HeunCFTError):
    """An internal consistency check failed."""


class DivisionByZero(HeunCFTError, ZeroDivisionError):
    pass


class ParameterSpaceMismatch(HeunCFTError, ValueError):
    pass


class GridMismatch(HeunCFTError, ValueError):
    pass


class LeadingCoefficientZero(HeunCFTError, ZeroDivisionError):
    pass


class LeadingCoefficientNotOne(HeunCFTError, ValueError):
    pass


class NonSquareLeadingCoefficient(HeunCFTError, ValueError):
    pass


class DivergentLimit(HeunCFTError, ArithmeticError):
    """A termwise limit does not exist (numerator outgrows denominator)."""


class PoleInClassicalLimit(HeunCFTError, ArithmeticError):
    """``b**2 * log(block)`` still has negative powers of ``b``.

    ``poles`` lists the surviving negative exponents of ``b``.
    """

    def __init__(self, message: str, poles: tuple[int, ...] = ()):
        super().__init__(message)
        self.poles = tuple(poles)


class GramSingular(InvariantViolation, ZeroDivisionError):
    pass


class NonlinearOrderEquation(InvariantViolation):
    pass


class ResonantDenominator(InvariantViolation, ZeroDivisionError):
    pass


class EvenResidueNonzero(InvariantViolation):
    pass


class ImaginaryUnitSurvives(InvariantViolation):
    """An odd power of the imaginary unit survived a classical scaling."""


class UnsupportedEquation(HeunCFTError, ValueError):
    pass


class NoBSRescaling(HeunCFTError, ValueError):
    pass


class ParseError(HeunCFTError, ValueError):
    pass
