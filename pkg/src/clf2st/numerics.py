"""Normal distribution primitives and symmetric positive definite linear algebra."""

import math

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .exceptions import DomainError, NotPositiveDefiniteError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the inverse normal CDF (rel. error < 1.15e-9).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425

SYMMETRY_RTOL = 1e-12


def _check_finite(x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"expected a finite real, got {x!r}")
    return x


def std_normal_cdf(x):
    """Standard normal CDF, computed through ``erfc`` for accurate tails."""
    x = _check_finite(x)
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_pdf(x):
    x = _check_finite(x)
    return math.exp(-0.5 * x * x) / _SQRT2PI


def _acklam_lower(p):
    # p in (0, 0.5]
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def std_normal_quantile(p):
    """Inverse of :func:`std_normal_cdf`.

    Uses Acklam's rational approximation followed by one Newton step on the
    CDF. The upper half is obtained by symmetry, so ``1 - p`` is formed
    exactly and no precision is lost near ``p = 1``.

    Parameters
    ----------
    p : float
        Probability strictly between 0 and 1.

    Returns
    -------
    float
        ``x`` with ``std_normal_cdf(x) == p`` to about machine precision.
    """
    p = _check_finite(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile requires 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -std_normal_quantile(1.0 - p)
    x = _acklam_lower(p)
    x -= (std_normal_cdf(x) - p) / std_normal_pdf(x)
    return x


def z_alpha(alpha):
    """Upper ``alpha`` quantile, i.e. ``z`` with ``Phi(-z) = alpha``."""
    return -std_normal_quantile(alpha)


def cholesky(m):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Accepts an :class:`SpdMatrix` (returns its cached factor) or an array.

    Raises
    ------
    NotPositiveDefiniteError
        With ``minor`` set to the order of the first non-positive leading minor.
    """
    if isinstance(m, SpdMatrix):
        return m.chol
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DomainError("matrix must have positive dimension")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    c, info = lapack.dpotrf(a, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefiniteError(int(info))
    if info < 0:
        raise DomainError(f"dpotrf rejected argument {-info}")
    return c


class SpdMatrix:
    """Immutable symmetric positive definite matrix with a cached Cholesky factor.

    ``kind`` is one of ``"identity"``, ``"diagonal"``, ``"dense"`` and is
    detected from the entries; solves take the matching fast path.
    """

    __slots__ = ("entries", "chol", "kind", "_diag")

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {a.shape}")
        scale = np.max(np.abs(a)) if a.size else 0.0
        if not np.all(np.abs(a - a.T) <= SYMMETRY_RTOL * max(scale, 1e-300)):
            raise DomainError("matrix is not symmetric within 1e-12 relative tolerance")
        a = 0.5 * (a + a.T)
        chol = cholesky(a)
        off = a - np.diag(np.diag(a))
        if not np.any(off):
            diag = np.diag(a).copy()
            kind = "identity" if np.all(diag == 1.0) else "diagonal"
        else:
            diag = None
            kind = "dense"
        a.setflags(write=False)
        chol.setflags(write=False)
        self.entries = a
        self.chol = chol
        self.kind = kind
        self._diag = diag

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d))

    @classmethod
    def diagonal(cls, variances):
        return cls(np.diag(np.asarray(variances, dtype=float)))

    @property
    def dim(self):
        return self.entries.shape[0]

    def solve(self, b):
        """Solve ``self @ x = b`` for a vector or a matrix of column right-hand sides."""
        return spd_solve(self, b)

    def quad(self, v):
        """``v^T self^{-1} v`` via a single triangular solve."""
        v = np.asarray(v, dtype=float)
        if self.kind == "identity":
            return float(v @ v)
        if self.kind == "diagonal":
            return float(np.sum(v * v / self._diag))
        u = solve_triangular(self.chol, v, lower=True, check_finite=False)
        return float(u @ u)

    def __repr__(self):
        return f"SpdMatrix(dim={self.dim}, kind={self.kind!r})"


def spd_solve(m, b):
    """Solve ``m @ x = b`` with ``m`` an :class:`SpdMatrix`."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != m.dim:
        raise DomainError(f"dimension mismatch: matrix is {m.dim}x{m.dim}, rhs has {b.shape[0]} rows")
    if m.kind == "identity":
        return b.copy()
    if m.kind == "diagonal":
        return b / (m._diag if b.ndim == 1 else m._diag[:, None])
    u = solve_triangular(m.chol, b, lower=True, check_finite=False)
    return solve_triangular(m.chol, u, lower=True, trans="T", check_finite=False)
