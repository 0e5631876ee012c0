"""Exception and warning types raised across the package."""


class WcoError(Exception):
    """Base class for all package errors."""


class PoleError(WcoError, ZeroDivisionError):
    """A map was evaluated at (or numerically at) one of its poles."""


class PoleOnDiscError(PoleError):
    """A Moebius map has a pole on the closed unit disc."""


class KernelPoleError(PoleError):
    """The shared denominator of w(t, z) and gamma(t, z) vanishes."""


class ZeroDenominatorError(PoleError):
    """p*phi1 + q vanishes, so the well-definedness ratio is undefined."""


class ZeroOmegaError(PoleError):
    """The generator weight omega vanishes where q has to be evaluated."""


class DegenerateInputError(WcoError, ValueError):
    pass


class SpecError(WcoError, ValueError):
    """An operator specification violates one of its invariants."""


class ShapeError(WcoError, ValueError):
    pass


class DomainError(WcoError, ValueError):
    pass


class DimensionError(WcoError, ValueError):
    pass


class NotLinearFractionalError(WcoError, ValueError):
    pass


class ConditionError(WcoError, ValueError):
    """A precondition certificate (well-definedness or self-map) failed."""


class NonConvergenceError(WcoError, RuntimeError):
    pass


class DivergentAreaIntegralError(WcoError, ArithmeticError):
    pass


class ConditioningWarning(UserWarning):
    """Coefficient extraction is dividing by a very small power of the radius."""
