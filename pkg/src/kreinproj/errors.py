"""Exception types raised by kreinproj.

All errors derive from :class:`KreinProjError` so callers can distinguish
library failures from built-in exceptions.
"""


class KreinProjError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(KreinProjError):
    """Raised when matrix shapes are incompatible with an operation."""


class NonFinite(KreinProjError):
    """Raised when an input contains NaN or infinite entries."""


class NotHermitian(KreinProjError):
    """Raised when a matrix required to be Hermitian is not, beyond tolerance."""


class NotIdempotent(KreinProjError):
    """Raised when a matrix required to satisfy P*P = P is not, beyond tolerance."""


class NotSymmetry(KreinProjError):
    """Raised when a matrix required to be a self-adjoint involution is not."""


class NotOrthonormal(KreinProjError):
    """Raised when a basis matrix does not have orthonormal columns."""


class BadRank(KreinProjError):
    """Raised when a requested rank is outside the admissible range."""


class NotSymmetryParam(KreinProjError):
    """Raised when a family parameter is not a symmetry on its subspace."""


class ConstraintViolated(KreinProjError):
    """Raised when family parameters fail their commutation constraint."""


class NotJProjection(KreinProjError):
    """Raised when the pair (P, J) does not satisfy J P J = P* within tolerance."""


class SingularShift(KreinProjError):
    """Raised when P + P* - I is numerically singular and its sign is undefined."""


class SingularBlock(KreinProjError):
    """Raised when a diagonal block that must be invertible is numerically singular."""


class DegenerateBlock(KreinProjError):
    """Raised when an intertwiner block expected to be invertible is rank deficient."""


class InternalMismatch(KreinProjError):
    """Raised when two independent computations of the same object disagree.

    Signals a tolerance or rank misclassification rather than bad user input.
    """


class FileFormatError(KreinProjError):
    """Raised when a matrix or report file does not match the expected schema."""
