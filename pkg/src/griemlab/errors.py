"""Exception hierarchy for griemlab."""


class GriemlabError(Exception):
    """Base class for all griemlab errors."""


class ChartDomainError(GriemlabError):
    """A point lies outside the coordinate chart's domain."""


class SingularMetricError(GriemlabError):
    """The symmetric part g is (numerically) singular at a point."""


class IndefiniteMetricError(GriemlabError):
    """An operation requiring positive-definite g was given an indefinite one.

    Spectral decomposition of a g-self-adjoint operator is only reliable for
    positive-definite g; with indefinite metrics light-like eigenvectors can
    make the operator non-diagonalizable, so we refuse instead of guessing.
    """


class StructureKindError(GriemlabError):
    """A structure-specific operation was applied to the wrong kind of chart."""


class NotApplicableError(GriemlabError):
    """An identity's preconditions are not met; its residual is undefined."""


class InapplicableSuiteError(GriemlabError):
    """A verification suite does not apply to the given manifold."""


class ExpressionError(GriemlabError):
    """A field expression string could not be parsed or evaluated."""


class ZooParameterError(GriemlabError):
    """Invalid parameters for a zoo manifold constructor."""
