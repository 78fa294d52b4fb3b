"""Exception hierarchy shared by all polymoments modules.

The CLI maps these onto exit codes: input errors -> 2, numeric failures -> 3,
resource caps -> 4.
"""


class PolyMomentsError(Exception):
    """Base class for every error raised by this package."""


class InputError(PolyMomentsError, ValueError):
    """Bad user input (malformed arguments, violated preconditions)."""


class PolySyntaxError(InputError):
    """Polynomial text did not match the coefficient-list grammar."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class DomainError(InputError):
    """An evaluation point lies outside the domain a method supports."""


class NumericError(PolyMomentsError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy answer."""


class NoConvergenceError(NumericError):
    pass


class PoleOnContourError(NumericError):
    """1 - t f(x) vanishes for some real x in [0, 1]."""


class BlockedPathError(NumericError):
    pass


class StepUnderflowError(NumericError):
    pass


class RootResidualError(NumericError):
    pass


class CoincidentRootsError(NumericError):
    pass


class InsufficientDataError(NumericError):
    pass


class FitDegenerateError(InsufficientDataError):
    pass


class ResourceLimitError(PolyMomentsError):
    """Exact arithmetic grew past the configured bit-size cap."""
