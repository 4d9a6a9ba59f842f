"""Exception hierarchy shared across the package."""


class LossyChannelError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(LossyChannelError, ValueError):
    """Operand shapes are incompatible."""


class NotPositiveDefinite(LossyChannelError, ArithmeticError):
    """A Cholesky pivot fell below the positive-definiteness threshold.

    For valid channel parameters every factored matrix is positive definite,
    so this usually signals parameters outside the numerically valid regime.
    """


class PhotonBudgetExceeded(LossyChannelError, ValueError):
    """sinh^2(r) consumes the whole photon budget, leaving no modulation."""


class DegenerateBaseline(LossyChannelError, ArithmeticError):
    """The r = 0 mutual information is ~0, so the relative gain is undefined."""


class GridTooCoarse(LossyChannelError, ValueError):
    """A quadrature grid failed its normalization or convergence gate."""


class InvalidSpec(LossyChannelError, ValueError):
    """A sweep/optimize/verify request is malformed."""
