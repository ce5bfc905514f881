"""Linear discriminant rules and their exact conditional error."""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateVarianceError, DomainError, InsufficientDataError
from .numerics import std_normal_cdf


@dataclass(frozen=True)
class TrainedClassifier:
    """Linear rule predicting label 1 iff ``weight @ (z - midpoint) > 0``."""

    weight: np.ndarray
    midpoint: np.ndarray
    kind: str
    train_size_per_class: int

    @property
    def d(self):
        return self.weight.shape[0]

    def scores(self, z):
        """Decision statistic for a single point or each row of a matrix."""
        return (np.asarray(z, dtype=float) - self.midpoint) @ self.weight


@dataclass(frozen=True)
class ConditionalError:
    e1: float
    e2: float

    @property
    def e(self):
        return (self.e1 + self.e2) / 2


def _check_pair(x, y, d=None):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or y.ndim != 2 or x.shape[1] != y.shape[1]:
        raise DomainError(f"x and y must be 2-D with matching columns, got {x.shape}, {y.shape}")
    if x.shape[0] == 0 or y.shape[0] == 0:
        raise InsufficientDataError("each class needs at least one sample")
    if d is not None and x.shape[1] != d:
        raise DomainError(f"data have {x.shape[1]} features, covariance is {d}x{d}")
    return x, y


def train_lda(x, y, sigma):
    """Fisher's LDA with known covariance: ``w = Sigma^-1 (mean(y) - mean(x))``."""
    x, y = _check_pair(x, y, sigma.dim)
    m0 = x.mean(axis=0)
    m1 = y.mean(axis=0)
    return TrainedClassifier(
        weight=sigma.solve(m1 - m0),
        midpoint=(m0 + m1) / 2,
        kind="lda-known-sigma",
        train_size_per_class=x.shape[0],
    )


def pooled_variances(x, y):
    """Per-feature within-class variance pooled over both classes (denominator ``nx + ny - 2``)."""
    cx = x - x.mean(axis=0)
    cy = y - y.mean(axis=0)
    return (np.sum(cx * cx, axis=0) + np.sum(cy * cy, axis=0)) / (x.shape[0] + y.shape[0] - 2)


def train_nb(x, y):
    """Naive Bayes rule: LDA with the pooled diagonal covariance estimate."""
    x, y = _check_pair(x, y)
    if x.shape[0] < 2 or y.shape[0] < 2:
        raise InsufficientDataError("naive Bayes needs at least 2 samples per class")
    s = pooled_variances(x, y)
    zero = np.flatnonzero(s <= 0)
    if zero.size:
        raise DegenerateVarianceError(int(zero[0]))
    m0 = x.mean(axis=0)
    m1 = y.mean(axis=0)
    return TrainedClassifier(
        weight=(m1 - m0) / s,
        midpoint=(m0 + m1) / 2,
        kind="naive-bayes",
        train_size_per_class=x.shape[0],
    )


def predict(clf, z):
    """Label(s) in {0, 1}; a score of exactly zero maps to 0."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != clf.d:
        raise DomainError(f"point has {z.shape[-1]} features, classifier expects {clf.d}")
    out = (clf.scores(z) > 0).astype(int)
    return int(out) if out.ndim == 0 else out


def conditional_error(clf, spec):
    """Exact misclassification probabilities of ``clf`` on the populations of ``spec``.

    The score ``w^T (Z - m)`` is Gaussian with variance ``w^T Sigma w`` under
    both classes, so each error is a single normal CDF evaluation.
    """
    if clf.d != spec.d:
        raise DomainError(f"classifier has d={clf.d}, problem has d={spec.d}")
    w = clf.weight
    v = float(w @ spec.sigma.entries @ w)
    if v <= 0.0:
        return ConditionalError(e1=0.0, e2=1.0)
    s = math.sqrt(v)
    a0 = float(w @ (spec.mu0 - clf.midpoint))
    a1 = float(w @ (spec.mu1 - clf.midpoint))
    return ConditionalError(e1=std_normal_cdf(a0 / s), e2=std_normal_cdf(-a1 / s))


def expected_error_raudys(psi, n, d):
    """Asymptotic expected LDA error with ``n`` training points per class.

    ``Phi(-(psi/2) / sqrt(1 + 2d/(n psi^2)))``, evaluated as
    ``Phi(-psi^2 / (2 sqrt(psi^2 + 2d/n)))`` so that ``psi = 0`` gives 1/2.
    """
    if psi < 0 or n < 1 or d < 1:
        raise DomainError(f"need psi >= 0, n >= 1, d >= 1; got psi={psi}, n={n}, d={d}")
    psi2 = float(psi) ** 2
    return std_normal_cdf(-psi2 / (2.0 * math.sqrt(psi2 + 2.0 * d / n)))
