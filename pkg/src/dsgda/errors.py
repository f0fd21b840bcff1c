"""Exception types shared across the library."""


class DsgdaError(Exception):
    """Base class for library errors."""


class UnsupportedProblemError(DsgdaError):
    """Operation needs capabilities the problem does not provide
    (e.g. function values on a gradient-only problem, or dimensions
    beyond what the brute-force oracles handle)."""


class ParameterError(DsgdaError):
    """Algorithm or analysis parameters violate a required inequality."""


class NumericsError(DsgdaError):
    """A solver produced a non-finite value."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class ConfigError(DsgdaError):
    """Invalid experiment configuration (bad field, unknown key, missing file)."""
