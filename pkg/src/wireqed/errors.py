"""Exception types shared across the package."""


class WireQEDError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WireQEDError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class OverflowGuardError(WireQEDError, OverflowError):
    """A special-function argument would exceed the representable range."""


class CoincidenceError(DomainError):
    """Two evaluation points coincide where a separated pair is required."""


class ConvergenceError(WireQEDError, RuntimeError):
    """A quadrature or series failed to converge within its budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class FitError(WireQEDError, RuntimeError):
    """A nonlinear fit did not produce a usable result."""


class ConfigError(WireQEDError, ValueError):
    """A run configuration failed validation."""
