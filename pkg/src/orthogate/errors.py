"""Exception hierarchy shared by every orthogate module."""


class OrthogateError(Exception):
    """Base class for all errors raised by orthogate."""


class DimensionError(OrthogateError, ValueError):
    pass


class PreconditionError(OrthogateError, ValueError):
    pass


class CommutationError(OrthogateError):
    """Raised when a family that must commute contains a non-commuting pair."""

    def __init__(self, i: int, j: int, norm: float):
        self.pair = (i, j)
        self.norm = norm
        super().__init__(
            f"matrices {i} and {j} do not commute (commutator max-norm {norm:.3e})"
        )


class NumericalError(OrthogateError, ArithmeticError):
    """Residuals stayed above tolerance after all retries."""


class GateParseError(OrthogateError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class GateValidationError(OrthogateError, ValueError):
    pass


class ProtocolUnavailableError(OrthogateError):
    pass


class InconsistencyError(OrthogateError, RuntimeError):
    """A search result failed its own certificate."""
