"""Exception hierarchy shared by every module."""


class BkernelError(Exception):
    """Base class for all package errors."""


class PreconditionError(BkernelError, ValueError):
    """An operation was called outside its domain."""


class ArityError(PreconditionError):
    """Annotated graphs with different annotation counts were glued."""


class MissingVertexError(PreconditionError, KeyError):
    pass


class ValidationError(BkernelError, ValueError):
    """A supplied local solution does not solve the instance."""


class ParameterError(BkernelError, ValueError):
    """Parameters are inconsistent, e.g. a rank budget that is too large."""


class BudgetExceeded(BkernelError):
    """An exhaustive routine refused to run because it would be too large."""


class ParseError(BkernelError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
