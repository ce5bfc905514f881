"""The equal-covariance Gaussian two-sample problem and seeded data generation."""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .numerics import SpdMatrix


@dataclass(frozen=True)
class SeedSpec:
    """Address of one independent random stream.

    Streams are derived with :class:`numpy.random.SeedSequence` using
    ``master_seed`` as entropy and ``namespace + (stream_index,)`` as the
    spawn key, then fed to the counter-based Philox bit generator. Distinct
    addresses give independent streams regardless of the order in which
    they are consumed.
    """

    master_seed: int
    stream_index: int = 0
    namespace: tuple = ()

    def __post_init__(self):
        for v in (self.master_seed, self.stream_index, *self.namespace):
            if not 0 <= int(v) < 2**64:
                raise DomainError(f"seed components must be unsigned 64-bit integers, got {v!r}")

    def generator(self):
        ss = np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=tuple(int(k) for k in self.namespace) + (int(self.stream_index),),
        )
        return np.random.Generator(np.random.Philox(ss))

    def child(self, index):
        """Sub-stream ``index`` nested under this stream."""
        return SeedSpec(self.master_seed, int(index), self.namespace + (int(self.stream_index),))


@dataclass(frozen=True)
class ProblemSpec:
    d: int
    n: int
    mu0: np.ndarray
    mu1: np.ndarray
    sigma: SpdMatrix

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise DomainError(f"d and n must be positive, got d={self.d}, n={self.n}")
        mu0 = np.asarray(self.mu0, dtype=float)
        mu1 = np.asarray(self.mu1, dtype=float)
        if mu0.shape != (self.d,) or mu1.shape != (self.d,):
            raise DomainError(f"mean vectors must have length d={self.d}")
        if self.sigma.dim != self.d:
            raise DomainError(f"sigma is {self.sigma.dim}x{self.sigma.dim}, expected d={self.d}")
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "mu1", mu1)

    @property
    def covariance_kind(self):
        return self.sigma.kind

    @property
    def delta(self):
        return self.mu0 - self.mu1


@dataclass(frozen=True)
class TwoSampleData:
    """``x`` holds the rows drawn from P (label 0), ``y`` those from Q (label 1)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 2 or x.shape != y.shape:
            raise DomainError(f"x and y must be 2-D with equal shapes, got {x.shape} and {y.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("data contain non-finite entries")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    def pooled(self):
        return np.vstack([self.x, self.y])


def snr(spec):
    """Mahalanobis distance between the class means, ``sqrt(delta^T Sigma^-1 delta)``."""
    return math.sqrt(spec.sigma.quad(spec.delta))


def spec_for_experiment(d, n, psi, direction="uniform"):
    """Identity-covariance problem whose SNR is exactly ``psi``.

    ``mu0 = 0`` and ``mu1 = -psi * v`` with ``v`` the unit vector
    ``(1, ..., 1) / sqrt(d)`` (``"uniform"``) or ``e_1`` (``"first-axis"``).
    """
    if psi < 0:
        raise DomainError(f"psi must be nonnegative, got {psi}")
    v = np.zeros(d)
    if direction == "uniform":
        v[:] = 1.0 / math.sqrt(d)
    elif direction == "first-axis":
        v[0] = 1.0
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return ProblemSpec(d=d, n=n, mu0=np.zeros(d), mu1=-psi * v, sigma=SpdMatrix.identity(d))


def sample(spec, seed):
    """Draw ``n`` rows from each class, ``mu + L g`` with ``L`` the Cholesky factor."""
    rng = seed.generator()
    g = rng.standard_normal((2 * spec.n, spec.d))
    if spec.sigma.kind == "identity":
        z = g
    elif spec.sigma.kind == "diagonal":
        z = g * np.sqrt(np.diag(spec.sigma.entries))
    else:
        z = g @ spec.sigma.chol.T
    return TwoSampleData(x=z[: spec.n] + spec.mu0, y=z[spec.n:] + spec.mu1)


def write_csv(data, path):
    """Write the labelled CSV format: ``f0..f{d-1}`` feature columns and ``label``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{j}" for j in range(data.d)] + ["label"])
        for label, rows in ((0, data.x), (1, data.y)):
            for row in rows:
                w.writerow([repr(float(v)) for v in row] + [label])


def read_csv(path):
    """Parse the labelled CSV format back into :class:`TwoSampleData`.

    Rows may appear in any order; within each class the file order is kept.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if not header or header[-1] != "label":
            raise DomainError(f"{path}: last column must be 'label'")
        expected = [f"f{j}" for j in range(len(header) - 1)]
        if header[:-1] != expected:
            raise DomainError(f"{path}: feature columns must be named f0..f{len(header) - 2}")
        rows = {0: [], 1: []}
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DomainError(f"{path}:{lineno}: expected {len(header)} fields, got {len(rec)}")
            try:
                label = int(rec[-1])
                feats = [float(v) for v in rec[:-1]]
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None
            if label not in rows:
                raise DomainError(f"{path}:{lineno}: label must be 0 or 1, got {label}")
            rows[label].append(feats)
    if len(rows[0]) != len(rows[1]):
        raise DomainError(
            f"{path}: classes must have equal sizes, got {len(rows[0])} and {len(rows[1])}"
        )
    if not rows[0]:
        raise DomainError(f"{path}: no samples")
    return TwoSampleData(x=np.array(rows[0]), y=np.array(rows[1]))
