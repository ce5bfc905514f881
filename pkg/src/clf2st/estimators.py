"""Sample-splitting, leave-one-out and resubstitution estimates of LDA error."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .classifier import train_lda
from .exceptions import DomainError, InsufficientDataError

@dataclass(frozen=True)
class ErrorEstimate:
    """Error fractions kept as integer counts over ``eval_count_per_class``."""

    count1: int
    count2: int
    eval_count_per_class: int
    scheme: str

    @property
    def e1_hat(self):
        return self.count1 / self.eval_count_per_class

    @property
    def e2_hat(self):
        return self.count2 / self.eval_count_per_class

    @property
    def e_hat(self):
        return (self.e1_hat + self.e2_hat) / 2

    @property
    def errors(self):
        """Total misclassified held-out points over both classes."""
        return self.count1 + self.count2

    @property
    def exact(self):
        """``e_hat`` as a :class:`fractions.Fraction`."""
        return Fraction(self.count1 + self.count2, 2 * self.eval_count_per_class)

def kernel_chol(sigma):
    """Cholesky factor in the form the kernels expect (``None`` for the identity)."""
    return None if sigma.kind == "identity" else sigma.chol

def _check(data, sigma):
    if data.d != sigma.dim:
        raise DomainError(f"data have {data.d} features, covariance is {sigma.dim}x{sigma.dim}")

def error_sample_split(data, sigma):
    """Train LDA on the first ``n/2`` rows of each class, test on the rest.

    Raises
    ------
    InsufficientDataError
        If ``n < 4``.
    DomainError
        If ``n`` is odd.
    """
    _check(data, sigma)
    n = data.n
    if n < 4:
        raise InsufficientDataError(f"sample splitting needs n >= 4 per class, got {n}")
    if n % 2:
        raise DomainError(f"sample splitting needs an even per-class size, got n={n}")
    c1, c2 = kernels.split_error_counts(data.x, data.y, kernel_chol(sigma))
    return ErrorEstimate(c1, c2, n // 2, "split")

def error_loo(data, sigma):
    _check(data, sigma)
    if data.n < 2:
        raise InsufficientDataError(f"leave-one-out needs n >= 2 per class, got {data.n}")
    c1, c2 = kernels.loo_error_counts(data.x, data.y, kernel_chol(sigma))
    return ErrorEstimate(c1, c2, data.n, "loo")

def error_resub(data, sigma):
    _check(data, sigma)
    clf = train_lda(data.x, data.y, sigma)
    c1 = int(np.count_nonzero(clf.scores(data.x) > 0))
    c2 = int(np.count_nonzero(clf.scores(data.y) <= 0))
    return ErrorEstimate(c1, c2, data.n, "resub")
