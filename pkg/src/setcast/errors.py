"""Exception types shared across the package."""


class DataFormatError(ValueError):
    """Raised when an input file or argument violates a documented precondition."""


class TrainingError(RuntimeError):
    """Raised when a model cannot be trained on the given data."""
