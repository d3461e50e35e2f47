"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid grid, kernel order above the configured maximum, or bad config."""


class DimensionMismatchError(ValueError):
    """Operands live on different time grids."""


class DomainError(ValueError):
    """A numeric argument lies outside its admissible range."""


class InvalidKernelError(ValueError):
    """Kernel factor count does not match its declared order."""


class NumericalBlowupError(RuntimeError):
    """SDE state became non-finite; carries the offending step index."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"non-finite SDE state at step {step}")


class SingularFlowError(RuntimeError):
    """First-variation process hit zero where a ratio is required."""
