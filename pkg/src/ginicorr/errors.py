"""Exception hierarchy shared by every module."""


class GinicorrError(Exception):
    """Base class for all toolkit errors."""


class LengthMismatch(GinicorrError):
    """Paired input sequences have different lengths."""


class TooFewPoints(GinicorrError):
    """Fewer observations than the operation requires."""


class NonFiniteValue(GinicorrError):
    """Input contains NaN or infinity; carries the offending index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainError(GinicorrError):
    """Argument outside the mathematical domain of the operation."""


class NotPositiveDefinite(DomainError):
    """A 2x2 scatter matrix fails the positive-definiteness check."""


class DegenerateColumn(GinicorrError):
    """A column is constant (or a required pairwise sum vanishes)."""


class DegenerateSample(GinicorrError):
    """Sample cannot support the estimator (e.g. all points coincident
    or collinear, making the scatter iterate singular)."""


class NonConvergence(GinicorrError):
    """Fixed-point iteration hit the iteration cap.

    ``report`` holds the last iterate and residual so callers may decide
    to use it anyway.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
