"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so library code raises the most specific
class that applies.
"""


class FRCError(Exception):
    """Base class for all library errors."""


class DomainError(FRCError, ValueError):
    """A parameter lies outside the domain where an operation is defined."""


class OutOfRangeError(FRCError, ValueError):
    """An argument to an inverse function exceeds the range of the forward map."""


class DivergenceError(FRCError, ArithmeticError):
    """A numerical integral failed to converge (typically because it does not exist)."""


class NumericalError(FRCError, ArithmeticError):
    """A computation hit a degenerate configuration (zero denominator, NaN, ...)."""
