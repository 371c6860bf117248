"""Exception types shared across the package."""


class TwoProjError(Exception):
    """Base class for every error raised by this package."""


class InvalidMatrixError(TwoProjError):
    """Input is not a well-formed finite complex matrix."""


class NotSquareError(TwoProjError):
    """A square matrix was required."""


class NotHermitianError(TwoProjError):
    """Hermiticity residual exceeds the tolerance."""


class NotProjectionError(TwoProjError):
    """Idempotency residual exceeds the tolerance."""


class DimMismatchError(TwoProjError):
    """Operands have incompatible shapes."""


class DomainError(TwoProjError):
    """A spectral function was evaluated too close to a singular point."""


class SingularError(TwoProjError):
    """A matrix that must be invertible is numerically singular."""


class BadRankError(TwoProjError):
    """A requested rank or dimension is out of range."""


class NormTooLargeError(TwoProjError):
    """The difference of the two projections has norm too close to 1."""


class InconsistentDimsError(TwoProjError):
    """Stored decomposition data has inconsistent dimensions."""


class NotInjectiveError(TwoProjError):
    """An operator that must be injective has a near-zero eigenvalue."""


class NotGenericError(TwoProjError):
    """The pair is not in generic position on the requested block."""


class NotCommutingError(TwoProjError):
    """A parameter block fails its required commutation relation."""


class NotUnitaryError(TwoProjError):
    """A parameter block fails the unitarity check."""


class RankMismatchError(TwoProjError):
    """The two idempotents have different ranks."""


class SpectrumOnCutError(TwoProjError):
    """An eigenvalue lies on the principal branch cut of the square root."""


class NotDiagonalizableError(TwoProjError):
    """Eigenvector matrix is too ill-conditioned to trust."""


class NotApplicableError(TwoProjError):
    """The requested construction does not exist for this pair."""


class NotUnimodularError(TwoProjError):
    """A phase parameter does not have modulus one."""


class ParseError(TwoProjError):
    """A matrix file is not valid JSON or has the wrong structure."""


class DimensionError(TwoProjError):
    """A matrix file's data length disagrees with its declared shape."""


class InternalError(TwoProjError):
    """An invariant that should hold by theory failed numerically."""
