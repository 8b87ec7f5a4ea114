"""Exception types shared across the package."""


class EltipError(Exception):
    """Base class for all package errors."""


class DimensionError(EltipError, ValueError):
    """Sizes of configs, states or problems do not agree."""


class ResourceError(EltipError):
    """A computation would exceed a configured size or work cap."""


class IntegrationAccuracyError(EltipError, ArithmeticError):
    """Time integration drifted further than the accepted norm bound."""


class InstanceParseError(EltipError, ValueError):
    """Instance text is not well-formed JSON."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InstanceValidationError(EltipError, ValueError):
    """Instance document is well-formed but violates the schema."""
