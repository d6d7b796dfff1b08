"""Exception types raised by freeneg."""


class FreeNegError(Exception):
    """Base class for all package errors."""


class InvalidCovarianceError(FreeNegError, ValueError):
    """Matrix is not a physical Majorana covariance matrix."""


class SingularGammaA(FreeNegError, ArithmeticError):
    """The subsystem-A block is (numerically) singular."""


class SingularBlock(FreeNegError, ArithmeticError):
    """A diagonal block needed by the block representation is singular."""


class UnitCircleEigenvalue(FreeNegError, ArithmeticError):
    """An eigenvalue of the twisted covariance lies on the unit circle."""

    def __init__(self, message, eigenvalues=()):
        super().__init__(message)
        self.eigenvalues = tuple(eigenvalues)


class NumericalError(FreeNegError, ArithmeticError):
    """A decomposition or integration step failed."""


class ChannelError(FreeNegError, ValueError):
    """Gaussian channel cannot be applied to the given input."""


class SizeCapError(FreeNegError, ValueError):
    """Request exceeds the size cap of the exponential-cost oracle."""


class DivergentAreaLawError(FreeNegError, ValueError):
    """Decay exponent too small for the area-law sums to converge."""
