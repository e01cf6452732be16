"""Exception taxonomy shared by all qnrlab modules."""


class QnrlabError(Exception):
    """Base class for all qnrlab errors."""


class NonSquare(QnrlabError):
    """Operation requires a square matrix."""


class NotHermitian(QnrlabError):
    """Matrix is not Hermitian within tolerance."""


class NotPSD(QnrlabError):
    """Matrix is not positive semidefinite within tolerance."""


class SingularForNegativePower(QnrlabError):
    """Negative power requested for a singular PSD matrix."""


class NotAccretive(QnrlabError):
    """Real part is not positive definite within tolerance."""


class RankTooSmall(QnrlabError):
    """Metric rank below the required minimum (rank >= 2)."""


class DimensionMismatch(QnrlabError):
    """Vector/matrix dimensions are incompatible."""


class NoAAdjoint(QnrlabError):
    """Operator does not admit an A-adjoint (range condition fails)."""


class NotABounded(QnrlabError):
    """Operator does not map the null space of the metric into itself."""


class DimensionTooSmall(QnrlabError):
    """No admissible orthogonal direction exists (needs dim >= 2 when |q| < 1)."""


class InvalidSpec(QnrlabError):
    """Invalid generator spec, measure, or monotone-function definition."""


class QuadratureNotConverged(QnrlabError):
    """Doubling the quadrature nodes changed the result beyond tolerance."""


class UnknownPredicate(QnrlabError):
    """Predicate id is not registered."""
