"""Pure numpy versions of the hot loops; the Cython module mirrors this API.

All functions return integer error counts so both backends agree exactly
(up to floating ties on the decision boundary, a probability-zero event).
``chol`` is the lower Cholesky factor of the covariance, or ``None`` for
the identity.
"""

import numpy as np
from scipy.linalg import cho_solve

_CHUNK = 64


def _solve(chol, b):
    # b: (d,) or (d, k)
    if chol is None:
        return b
    return cho_solve((chol, True), b, check_finite=False)


def split_error_counts(x, y, chol):
    """Train on the first half of each class, count errors on the second half.

    Returns ``(c1, c2)``: held-out P rows scored positive and held-out Q
    rows scored non-positive.
    """
    h = x.shape[0] // 2
    m0 = x[:h].mean(axis=0)
    m1 = y[:h].mean(axis=0)
    w = _solve(chol, m1 - m0)
    mid = 0.5 * (m0 + m1)
    c1 = int(np.count_nonzero((x[h:2 * h] - mid) @ w > 0))
    c2 = int(np.count_nonzero((y[h:2 * h] - mid) @ w <= 0))
    return c1, c2


def retrain_error_counts(pooled, perms, chol):
    """Sample-split error count for every relabelling of the pooled rows.

    Row ``p`` of ``perms`` orders the ``2n`` pooled rows; the first ``n``
    become class 0 and the rest class 1, after which the count is exactly
    ``sum(split_error_counts(...))`` on that arrangement.
    """
    P, two_n = perms.shape
    n = two_n // 2
    h = n // 2
    out = np.empty(P, dtype=np.int64)
    for start in range(0, P, _CHUNK):
        idx = perms[start:start + _CHUNK]
        z = pooled[idx]                      # (k, 2n, d)
        m0 = z[:, :h].mean(axis=1)
        m1 = z[:, n:n + h].mean(axis=1)
        w = _solve(chol, (m1 - m0).T).T      # (k, d)
        mid = 0.5 * (m0 + m1)
        s0 = np.einsum("kid,kd->ki", z[:, h:2 * h] - mid[:, None], w)
        s1 = np.einsum("kid,kd->ki", z[:, n + h:n + 2 * h] - mid[:, None], w)
        out[start:start + idx.shape[0]] = (s0 > 0).sum(axis=1) + (s1 <= 0).sum(axis=1)
    return out


def fixed_rule_error_counts(scores, perms):
    """Error counts of a fixed rule when its held-out scores are relabelled.

    ``scores`` has length ``2h``; row ``p`` of ``perms`` assigns its first
    ``h`` entries to class 0 and the rest to class 1.
    """
    h = perms.shape[1] // 2
    pos = scores > 0
    lab = pos[perms]
    return lab[:, :h].sum(axis=1) + (~lab[:, h:]).sum(axis=1)


def loo_error_counts(x, y, chol):
    """Leave-one-out error counts ``(c1, c2)`` for LDA with known covariance.

    Dropping ``X_i`` moves the class-0 mean by ``(m0 - X_i)/(n-1)``, so every
    held-out weight vector is the full-data weight plus a rank-one
    correction; all corrections come from one multi-column solve.
    """
    n = x.shape[0]
    m0 = x.mean(axis=0)
    m1 = y.mean(axis=0)
    w_full = _solve(chol, m1 - m0)
    k = 1.0 / (n - 1)
    # class 0: m0' = m0 + k (m0 - x_i)
    m0_loo = m0 + k * (m0 - x)
    w0 = w_full - k * _solve(chol, (m0 - x).T).T
    c1 = np.count_nonzero(np.sum((x - 0.5 * (m0_loo + m1)) * w0, axis=1) > 0)
    m1_loo = m1 + k * (m1 - y)
    w1 = w_full + k * _solve(chol, (m1 - y).T).T
    c2 = np.count_nonzero(np.sum((y - 0.5 * (m0 + m1_loo)) * w1, axis=1) <= 0)
    return int(c1), int(c2)
