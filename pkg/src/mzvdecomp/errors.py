"""Exception types raised across the package."""


class MZVError(Exception):
    """Base class for all package errors."""


class ParseError(MZVError, ValueError):
    pass


class NotConvergent(MZVError, ValueError):
    """A word or index does not describe a convergent multiple zeta value."""


class AmbiguousReconstruction(MZVError):
    """Continued-fraction reconstruction could not single out one rational.

    Carries the attempt history when raised by the escalation loop.
    """

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = list(attempts or [])


class PrecisionUnreachable(MZVError):
    pass


class CapExceeded(MZVError):
    """A weight or length cap was exceeded."""


class NotABasis(MZVError):
    """The rho-matrix at some weight is singular."""

    def __init__(self, weight, rank=None, size=None):
        detail = f" (rank {rank} of {size})" if rank is not None else ""
        super().__init__(f"NotABasis({weight}){detail}")
        self.weight = weight
        self.rank = rank
        self.size = size


class DimensionMismatch(MZVError):
    """The number of basis monomials at a weight differs from d_N."""

    def __init__(self, weight, found, expected):
        super().__init__(
            f"DimensionMismatch at weight {weight}: {found} monomials, expected {expected}"
        )
        self.weight = weight
        self.found = found
        self.expected = expected


class SingularMatrix(MZVError, ArithmeticError):
    def __init__(self, rank, size):
        super().__init__(f"singular matrix: rank {rank} < {size}")
        self.rank = rank
        self.size = size


class InvalidBasis(MZVError, ValueError):
    """A basis description is malformed or lacks required elements."""
