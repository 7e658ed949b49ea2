"""Exceptions raised by the dual Schur toolkit."""


class DualSchurError(Exception):
    """Base class for every error raised by this package."""


class BoxViolation(DualSchurError):
    """A partition does not fit in the requested n x k rectangle."""


class TooLarge(DualSchurError):
    """An exhaustive enumeration would exceed the configured cap."""


class InvalidArgument(DualSchurError, ValueError):
    pass


class InvalidParams(DualSchurError, ValueError):
    pass


class PoleHit(DualSchurError):
    pass


class ContourInfeasible(DualSchurError):
    """Circular contours cannot separate {-y_j} from {1/x_i}."""


class NoConvergence(DualSchurError):
    pass


class SingularPoint(DualSchurError):
    pass


class DivergentIntegral(DualSchurError):
    """Adaptive quadrature hit its panel cap without converging."""


class NoRoot(DualSchurError):
    pass


class RootCountMismatch(DualSchurError):
    pass


class EmptyInput(DualSchurError, ValueError):
    pass


class CriticalRegime(DualSchurError):
    """Edge scaling requested where sigma is infinite."""


class NotCritical(DualSchurError):
    pass


class ConfigInvalid(DualSchurError):
    pass
