"""Exception types raised by the correlation pipeline."""


class LMGError(Exception):
    """Base class for all errors raised by :mod:`lmgcorr`."""


class InvalidParameter(LMGError, ValueError):
    """A model parameter lies outside 0 <= gamma < 1, h >= 0."""


class InvalidPartition(LMGError, ValueError):
    """Partition fractions are out of range or inconsistent."""


class SingularPoint(LMGError, ArithmeticError):
    """The Gaussian limit is evaluated exactly at the critical field h = 1."""


class NonPhysical(LMGError, ArithmeticError):
    """A covariance matrix violates the uncertainty principle."""


class DomainError(LMGError, ValueError):
    """A function argument is outside its mathematical domain."""


class DimensionTooLarge(LMGError, ValueError):
    """An exact-diagonalization request exceeds the dense-matrix cap."""


class ConsistencyError(LMGError, RuntimeError):
    """Two independent evaluations of the same quantity disagree.

    Raised by internal cross-checks (closed forms against determinants,
    the two ``E^min`` branches at their crossover); it signals a bug or a
    loss of precision, never a user error.
    """
