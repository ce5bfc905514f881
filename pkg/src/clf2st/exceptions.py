"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class NotPositiveDefiniteError(DomainError):
    """Cholesky factorization hit a non-positive pivot.

    Attributes
    ----------
    minor : int
        1-based order of the leading minor that is not positive.
    """

    def __init__(self, minor, msg=None):
        self.minor = minor
        super().__init__(
            msg or f"matrix is not positive definite: leading minor of order {minor} "
            "is not positive"
        )


class InsufficientDataError(ValueError):
    """Too few samples for the requested estimator."""


class DegenerateVarianceError(ValueError):
    """A feature has zero pooled variance."""

    def __init__(self, feature):
        self.feature = feature
        super().__init__(f"feature f{feature} has zero pooled variance")
