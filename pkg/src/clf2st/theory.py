"""Closed-form power curves for two-sample mean testing.

The minimax expressions are asymptotic; their vanishing ``o(1)`` remainder
is dropped, so values are approximations at finite ``(n, d)``.
"""

import math
from dataclasses import dataclass

from .classifier import expected_error_raudys
from .exceptions import DomainError
from .numerics import std_normal_cdf, z_alpha as _z_alpha


@dataclass(frozen=True)
class PowerQuery:
    """Arguments shared by the power formulas.

    ``z`` pins the rejection cutoff exactly; when omitted it is computed from
    ``alpha``. Build with :meth:`from_z` to fix the cutoff and derive alpha.
    """

    psi: float
    n: int
    d: int
    alpha: float
    z: float | None = None

    def __post_init__(self):
        if self.psi < 0 or self.n < 1 or self.d < 1 or not 0.0 < self.alpha < 1.0:
            raise DomainError(
                f"invalid power query: psi={self.psi}, n={self.n}, d={self.d}, alpha={self.alpha}"
            )

    @classmethod
    def from_z(cls, psi, n, d, z):
        return cls(psi=psi, n=n, d=d, alpha=std_normal_cdf(-z), z=float(z))

    @property
    def z_alpha(self):
        return self.z if self.z is not None else _z_alpha(self.alpha)


def minimax_power_lower_bound(q):
    psi2 = q.psi ** 2
    n, d = q.n, q.d
    shrink = math.sqrt(d) / math.sqrt(d + n * psi2)
    signal = psi2 / math.sqrt(8.0 * d / n**2 + 8.0 * psi2 / n)
    return std_normal_cdf(-shrink * q.z_alpha + signal)


def low_snr_power(q):
    """Minimax bound in the regime ``psi^2 << d/n``: ``Phi(-z + n psi^2 / sqrt(8d))``."""
    return std_normal_cdf(-q.z_alpha + q.n * q.psi**2 / math.sqrt(8.0 * q.d))


def lda_power_approx(q, low_snr=False):
    """Linearized power of the sample-splitting LDA test.

    With ``low_snr=True`` returns ``Phi(n psi^2 / sqrt(16 pi d) - z)``, the
    form valid for ``psi^2 << d/n``.
    """
    psi2 = q.psi ** 2
    n, d = q.n, q.d
    if low_snr:
        shift = n * psi2 / math.sqrt(16.0 * math.pi * d)
    else:
        shift = psi2 / math.sqrt(4.0 * math.pi * psi2 / n + 16.0 * math.pi * d / n**2)
    return std_normal_cdf(shift - q.z_alpha)


def lda_expected_power(q):
    """``Phi(sqrt(2n) (1/2 - E_{n/2}) - z)`` with the asymptotic LDA error ``E``."""
    if q.n % 2:
        raise DomainError(f"n must be even so that n/2 points train the rule, got n={q.n}")
    e_half = expected_error_raudys(q.psi, q.n // 2, q.d)
    return std_normal_cdf(math.sqrt(2 * q.n) * (0.5 - e_half) - q.z_alpha)


def argument_shift_ratio(q):
    """Ratio of the low-SNR minimax shift to the low-SNR LDA shift (``sqrt(2 pi)``)."""
    psi2 = q.psi ** 2
    return (q.n * psi2 / math.sqrt(8.0 * q.d)) / (q.n * psi2 / math.sqrt(16.0 * math.pi * q.d))
