"""Exception types raised across the package."""


class OTCutError(Exception):
    """Base class for every error raised by :mod:`otcut`."""


class NegativeWeight(OTCutError, ValueError):
    pass


class AsymmetricInput(OTCutError, ValueError):
    pass


class EmptyGraph(OTCutError, ValueError):
    pass


class ParseError(OTCutError, ValueError):
    """Malformed graph/label file. ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message, lineno=0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class IndexOutOfRange(ParseError):
    pass


class InfeasibleMarginals(OTCutError, ValueError):
    pass


class NumericalFailure(OTCutError, RuntimeError):
    pass


class DimensionMismatch(OTCutError, ValueError):
    pass


class LengthMismatch(OTCutError, ValueError):
    pass


class ConfigError(OTCutError, ValueError):
    pass


class TooLarge(OTCutError, ValueError):
    pass
