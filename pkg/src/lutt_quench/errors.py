"""Exception types shared across the package."""


class LuttQuenchError(Exception):
    """Base class for every error raised by this package."""


class StabilityError(LuttQuenchError, ValueError):
    """Coupling and potential strength violate |lambda * v(p)| < 2 pi."""


class GridMismatch(LuttQuenchError, ValueError):
    pass


class LightConeSingularity(LuttQuenchError, ArithmeticError):
    """Evaluation point sits inside a light-cone exclusion window."""


class DomainError(LuttQuenchError, ValueError):
    pass


class ToleranceNotMet(LuttQuenchError, RuntimeError):
    pass


class InsufficientSamples(LuttQuenchError, ValueError):
    pass


class NonPositiveValue(LuttQuenchError, ValueError):
    pass


class WindowTooCoarse(LuttQuenchError, ValueError):
    pass
