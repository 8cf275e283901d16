"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class NonPositiveAmplitude(ConfigError):
    pass


class NegativeRate(ConfigError):
    pass


class OddChainLength(ConfigError):
    pass


class MissingKey(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class NumericalError(RuntimeError):
    """Numerical routine failed to meet its tolerance."""


class QuadratureNotConverged(NumericalError):
    pass


class NotADensityMatrix(ValueError):
    pass


class DomainError(ValueError):
    pass


class UnsupportedSeparation(ValueError):
    pass


class SizeOutOfRange(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class EmptyWindow(ValueError):
    pass
