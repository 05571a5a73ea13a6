"""
Error kinds raised across tailix.
All of them derive from TailixError so callers (e.g. the command line interface) can catch the whole family.
"""


class TailixError(Exception):
    """Base class of all errors raised by tailix."""


class InvalidParametersError(TailixError, ValueError):
    """Model parameters violate their constraints (e.g. c1 <= 0 or beta <= alpha)."""


class InfeasibleTailError(TailixError, ValueError):
    """No support start x0 with survival(x0) = 1 exists on the monotone part of the tail."""


class DomainError(TailixError, ValueError):
    """An argument lies outside the domain of a function."""


class PositivityError(DomainError):
    """Observations must be strictly positive and finite."""


class TuningError(TailixError, ValueError):
    """A tuning parameter (k, m, s, r) is out of range for the given sample."""


class DegenerateEstimateError(TailixError, ArithmeticError):
    """The estimator is undefined on this sample (zero gap, pole, vanishing statistic)."""


class InversionError(DegenerateEstimateError):
    """The kernel statistic lies outside the range of the function h_f and can not be inverted."""


class KernelError(DegenerateEstimateError):
    """The kernel can not be evaluated at a block ratio (e.g. log of zero)."""


class NumericError(TailixError, RuntimeError):
    """An iterative numerical procedure did not converge."""


class QuadratureError(NumericError):
    """The adaptive quadrature could not reach the requested tolerance."""


class InsufficientDataError(TailixError, ValueError):
    """Too few values for a statistical test."""


class DegenerateTuningError(TailixError, ValueError):
    """An optimal tuning requested from theory does not exist (chi = 0 or D_j = 0)."""


class ParseError(TailixError, ValueError):
    """A line of an input file is not a decimal number."""
