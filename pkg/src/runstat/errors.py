"""Exception hierarchy shared by the library and the command line."""


class RunstatError(Exception):
    """Base class for all errors raised by runstat."""


class DataValidationError(RunstatError, ValueError):
    """Input data violates a contract (non-positive sigma, malformed row, ...)."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class NumericalError(RunstatError, ArithmeticError):
    """An iterative numerical method failed to converge."""


class CapabilityError(RunstatError):
    """The requested computation is outside what the chosen method supports."""


class EmptySampleError(RunstatError, ValueError):
    """A Monte Carlo sample set holds no usable values."""


class InsufficientTailError(RunstatError, ValueError):
    """Too few samples beyond a quantile to estimate it; increase K."""
