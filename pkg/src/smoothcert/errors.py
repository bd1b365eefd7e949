"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A numeric argument is outside the domain an operation accepts."""


class DegenerateInputError(ValueError):
    """An input makes the bound formula diverge (e.g. a zero runner-up probability)."""


class DivergenceUndefinedError(ValueError):
    """P puts mass where Q has none, so the Renyi divergence is infinite."""


class ModelFormatError(ValueError):
    """A model file does not match the expected JSON schema."""


class DataFormatError(ValueError):
    """A dataset or records file is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
