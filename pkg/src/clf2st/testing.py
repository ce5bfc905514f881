"""Two-sample test statistics, analytic tests and permutation protocols.

Permutation p-values use the add-one rule ``(1 + #{T^p >= T*}) / (P + 1)``,
so ties count against rejection and the test is exactly valid under an
exchangeable null.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import kernels
from .classifier import pooled_variances, train_lda
from .estimators import error_sample_split, kernel_chol
from .exceptions import DegenerateVarianceError, DomainError, InsufficientDataError
from .model import SeedSpec, TwoSampleData
from .numerics import std_normal_cdf, z_alpha as _z_alpha

DEFAULT_PERMUTATIONS = 199


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # not a pytest class

    statistic: float
    threshold: float
    reject: bool
    p_value: float
    alpha: float
    scheme: str


@dataclass(frozen=True)
class PermutationConfig:
    p: int = DEFAULT_PERMUTATIONS
    seed: SeedSpec = field(default_factory=lambda: SeedSpec(0))

    def __post_init__(self):
        if int(self.p) < 1:
            raise DomainError(f"number of permutations must be >= 1, got {self.p}")

    def permutations(self, size):
        """``(P, size)`` array of orderings of ``range(size)``.

        Row ``p`` ranks the uniforms in counter block ``p`` of the seeded
        Philox stream, so it can be recomputed alone (:meth:`permutation`)
        and does not depend on how many other rows are drawn.
        """
        width = _padded(size)
        u = self.seed.generator().random((self.p, width))[:, :size]
        return np.argsort(u, axis=1, kind="stable")

    def permutation(self, index, size):
        """Row ``index`` of :meth:`permutations`, computed by jumping the counter."""
        width = _padded(size)
        bitgen = self.seed.generator().bit_generator.advance(index * width // 4)
        u = np.random.Generator(bitgen).random(width)[:size]
        return np.argsort(u, kind="stable")


def _padded(size):
    # Philox emits 4 words per counter step; whole blocks keep rows addressable
    return -(-size // 4) * 4


def _level(alpha, z_alpha):
    if (alpha is None) == (z_alpha is None):
        raise DomainError("give exactly one of alpha and z_alpha")
    if z_alpha is not None:
        return std_normal_cdf(-z_alpha), float(z_alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return float(alpha), _z_alpha(alpha)


def stat_split_accuracy(data, sigma):
    """``sqrt(2n) * (1/2 - E_split)`` with ``n`` the full per-class size."""
    est = error_sample_split(data, sigma)
    return math.sqrt(2 * data.n) * (0.5 - est.e_hat)


def test_split_accuracy(data, sigma, alpha=None, *, z_alpha=None):
    """Reject when the scaled accuracy gain exceeds the normal quantile.

    Pass either ``alpha`` or the threshold ``z_alpha`` directly; the latter
    reproduces experiments stated in terms of a fixed cutoff.
    """
    alpha, z = _level(alpha, z_alpha)
    t = stat_split_accuracy(data, sigma)
    return TestOutcome(t, z, bool(t > z), std_normal_cdf(-t), alpha, "split-accuracy")


def stat_hotelling(data, sigma):
    if data.d != sigma.dim:
        raise DomainError(f"data have {data.d} features, covariance is {sigma.dim}x{sigma.dim}")
    return sigma.quad(data.x.mean(axis=0) - data.y.mean(axis=0))


def _chi2_outcome(t, n, d, alpha, scheme):
    # (n/2) * T ~ chi2_d under the null
    threshold = 2.0 / n * stats.chi2.ppf(1.0 - alpha, d)
    p = float(stats.chi2.sf(0.5 * n * t, d))
    return TestOutcome(t, threshold, bool(t > threshold), max(p, np.finfo(float).tiny), alpha, scheme)


def test_hotelling(data, sigma, alpha=None, *, z_alpha=None):
    """Known-covariance Hotelling test calibrated by ``T_H ~ (2/n) chi2_d``."""
    alpha, _ = _level(alpha, z_alpha)
    return _chi2_outcome(stat_hotelling(data, sigma), data.n, data.d, alpha, "hotelling")


def stat_sd(data):
    """Hotelling statistic with the pooled diagonal covariance estimate in place of Sigma."""
    if data.n < 2:
        raise InsufficientDataError("the diagonal statistic needs n >= 2 per class")
    s = pooled_variances(data.x, data.y)
    zero = np.flatnonzero(s <= 0)
    if zero.size:
        raise DegenerateVarianceError(int(zero[0]))
    diff = data.x.mean(axis=0) - data.y.mean(axis=0)
    return float(np.sum(diff * diff / s))


def test_sd(data, alpha=None, *, z_alpha=None):
    """Diagonal statistic with the same chi-square reference as Hotelling.

    The reference ignores variance-estimation noise, so the level is only
    approximate for small ``n``; use :func:`perm_test_direct` for exact level.
    """
    alpha, _ = _level(alpha, z_alpha)
    return _chi2_outcome(stat_sd(data), data.n, data.d, alpha, "sd")


def _rank_outcome(t_star, t_perm, alpha, scheme):
    """Outcome from an observed statistic and its permutation replicates."""
    t_perm = np.asarray(t_perm)
    P = t_perm.shape[0]
    count = int(np.count_nonzero(t_perm >= t_star))
    p_value = (1 + count) / (P + 1)
    # largest K with K/(P+1) <= alpha; reject iff t_star beats the K-th largest replicate
    K = 0
    while K < P and (K + 1) / (P + 1) <= alpha:
        K += 1
    threshold = float(np.sort(t_perm)[::-1][K - 1]) if K else math.inf
    return TestOutcome(float(t_star), threshold, bool(p_value <= alpha), p_value, alpha, scheme)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def perm_test_direct(stat, data, cfg, alpha=0.05, permutations=None):
    """Permutation test wrapped around an arbitrary statistic.

    Parameters
    ----------
    stat : callable
        Maps :class:`TwoSampleData` to a real; larger means more evidence
        against the null.
    permutations : array_like, optional
        Explicit ``(P, 2n)`` orderings of the pooled rows, overriding ``cfg``.
    """
    _check_alpha(alpha)
    perms = cfg.permutations(2 * data.n) if permutations is None else np.asarray(permutations)
    pooled = data.pooled()
    n = data.n
    t_star = stat(data)
    t_perm = [stat(TwoSampleData(pooled[idx[:n]], pooled[idx[n:]])) for idx in perms]
    return _rank_outcome(t_star, t_perm, alpha, "perm-direct")


def _split_halves(data):
    n = data.n
    if n < 4:
        raise InsufficientDataError(f"sample splitting needs n >= 4 per class, got {n}")
    if n % 2:
        raise DomainError(f"sample splitting needs an even per-class size, got n={n}")
    return n // 2


def perm_test_method1(data, sigma, cfg, alpha=0.05, permutations=None):
    """Permute only the held-out half; the rule trained on the first half stays fixed.

    The statistic is the held-out accuracy. Tests whether this particular
    classifier beats chance.
    """
    _check_alpha(alpha)
    h = _split_halves(data)
    n = data.n
    est = error_sample_split(data, sigma)
    clf = train_lda(data.x[:h], data.y[:h], sigma)
    scores = clf.scores(np.vstack([data.x[h:], data.y[h:]]))
    perms = cfg.permutations(n) if permutations is None else np.asarray(permutations)
    counts = kernels.fixed_rule_error_counts(scores, perms)
    return _rank_outcome(1.0 - est.errors / n, 1.0 - counts / n, alpha, "perm-method1")


def perm_test_method2(data, sigma, cfg, alpha=0.05, permutations=None):
    """Permute all ``2n`` points and retrain on every relabelling.

    Each replicate reruns the full sample-splitting procedure, so this
    tests whether any linear rule learnable from the data beats chance.
    """
    _check_alpha(alpha)
    _split_halves(data)
    n = data.n
    est = error_sample_split(data, sigma)
    perms = cfg.permutations(2 * n) if permutations is None else np.asarray(permutations)
    counts = kernels.retrain_error_counts(data.pooled(), perms, kernel_chol(sigma))
    return _rank_outcome(1.0 - est.errors / n, 1.0 - counts / n, alpha, "perm-method2")
