"""Exception types shared across the package."""


class SparsepathError(Exception):
    """Base class for all package-specific errors."""


class GraphParseError(SparsepathError):
    """A graph file or stream could not be parsed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedFormatError(SparsepathError):
    """The input declares a format variant this package does not handle."""


class NegativeWeightError(SparsepathError):
    """An algorithm that requires non-negative weights saw a negative edge."""


class GraphSizeError(SparsepathError):
    """The graph exceeds a configured size cap for the requested operation."""
