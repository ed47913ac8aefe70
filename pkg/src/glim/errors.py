"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems -> 1, invariant
failures -> 2, size caps -> 3.
"""


class GlimError(Exception):
    """Base class for all package errors."""


class GraphFormatError(GlimError, ValueError):
    """Raised when an edge-list or graphon file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceededError(GlimError, ValueError):
    """An exhaustive routine was asked to handle an instance above its cap."""


class InvariantError(GlimError, AssertionError):
    """A runtime-checked mathematical guarantee did not hold."""
