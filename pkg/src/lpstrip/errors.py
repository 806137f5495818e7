"""Exception types shared across the package."""


class DegreeCapError(ValueError):
    """Raised when a polynomial or window exceeds the supported degree."""


class DomainError(ValueError):
    """Raised when a function is evaluated outside its admissible domain."""


class RootFindingError(ArithmeticError):
    """Simultaneous iteration failed to converge.

    The best iterate found so far is kept on ``best`` so callers can
    still inspect it.
    """

    def __init__(self, message, best=None, iterations=0):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class PairingError(ValueError):
    """Roots of a real polynomial could not be matched into conjugate pairs."""
