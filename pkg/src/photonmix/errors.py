"""Exception hierarchy shared by all photonmix modules."""


class PhotonmixError(Exception):
    """Base class for every error raised by photonmix."""


class InvalidParameterError(PhotonmixError, ValueError):
    """A physical or numerical parameter violates its contract."""


class NumericalDomainError(PhotonmixError, ArithmeticError):
    """A computation left its numerical domain (non-finite sample, 0/0, ...)."""


class DegenerateAnchorError(InvalidParameterError):
    """The reference aperture sits on a zero of the local-oscillator mode."""


class UndefinedVisibilityError(NumericalDomainError):
    """Visibility requested for a curve whose plateau value is zero."""


class ConfigError(PhotonmixError):
    """Scenario file could not be parsed or validated."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        self.detail = message
        prefix = []
        if line is not None:
            prefix.append(f"line {line}")
        if key is not None:
            prefix.append(f"key '{key}'")
        if prefix:
            message = f"{', '.join(prefix)}: {message}"
        super().__init__(message)
