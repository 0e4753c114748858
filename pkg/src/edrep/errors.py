"""Exception hierarchy shared by all computation modules."""


class EdrepError(Exception):
    """Base class for every error raised by this package."""


class ComputationError(EdrepError):
    pass


class NonConvergent(ComputationError):
    pass


class NonFiniteSample(ComputationError):
    def __init__(self, x, value):
        super().__init__(f"integrand returned {value!r} at x={x!r}")
        self.x = x
        self.value = value


class ZeroFrequency(ComputationError):
    pass


class DomainError(ComputationError, ValueError):
    pass


class DepthUnsupported(ComputationError):
    pass


class NormalizationError(ComputationError):
    pass


class DivergentMoment(ComputationError):
    pass


class ZeroSeparation(ComputationError, ValueError):
    pass


class EmptySpectrum(ComputationError, ValueError):
    pass


class NonPositiveGap(ComputationError, ValueError):
    pass


class ConfigError(EdrepError):
    pass


class IoError(EdrepError):
    pass
