"""Monte Carlo power estimation and the constant/increasing power experiments.

Repetition ``r`` of grid point ``k`` draws its data from the stream
``SeedSpec(master_seed, r, (k,))`` and its permutations from children of
that stream, so every result is a function of the configuration and master
seed alone. Workers return integer rejection counts that are summed, which
makes the output independent of the number of workers.
"""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

from . import testing as tst
from .estimators import error_loo, error_resub
from .exceptions import DomainError
from .model import SeedSpec, sample, snr, spec_for_experiment
from .numerics import std_normal_cdf
from .theory import PowerQuery, lda_expected_power, lda_power_approx, minimax_power_lower_bound

CSV_COLUMNS = (
    "d", "n", "psi", "empirical_power", "mc_stderr",
    "theory_minimax", "theory_lda_approx", "theory_lda_expected",
)
SCHEMES = (
    "split-accuracy", "hotelling", "sd",
    "perm-direct", "perm-method1", "perm-method2", "perm-loo", "perm-resub",
)
PAPER_Z_ALPHA = 2.0
PAPER_R = 200
GRID_SIZE = 30


@dataclass(frozen=True)
class Level:
    """Test level given either as ``alpha`` or as a fixed normal cutoff ``z_alpha``."""

    alpha: float | None = None
    z_alpha: float | None = None

    def __post_init__(self):
        if (self.alpha is None) == (self.z_alpha is None):
            raise DomainError("exactly one of alpha and z_alpha must be set")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def effective_alpha(self):
        return self.alpha if self.alpha is not None else std_normal_cdf(-self.z_alpha)

    def query(self, psi, n, d):
        if self.z_alpha is not None:
            return PowerQuery.from_z(psi, n, d, self.z_alpha)
        return PowerQuery(psi, n, d, self.alpha)

    def kwargs(self):
        return {"z_alpha": self.z_alpha} if self.z_alpha is not None else {"alpha": self.alpha}


@dataclass(frozen=True)
class ExperimentConfig:
    grid: tuple
    repetitions: int = PAPER_R
    level: Level = field(default_factory=lambda: Level(z_alpha=PAPER_Z_ALPHA))
    test_scheme: str = "split-accuracy"
    permutation_p: int | None = None
    master_seed: int = 0
    direction: str = "uniform"

    def __post_init__(self):
        if self.repetitions < 1:
            raise DomainError(f"repetitions: must be >= 1, got {self.repetitions}")
        if self.test_scheme not in SCHEMES:
            raise DomainError(f"test_scheme: unknown scheme {self.test_scheme!r}")
        if self.permutation_p is not None and self.permutation_p < 1:
            raise DomainError(f"permutation_p: must be >= 1, got {self.permutation_p}")
        for d, n, psi in self.grid:
            if n % 2 or n < 4:
                raise DomainError(f"grid: n must be even and >= 4, got n={n}")
            if d < 1 or psi < 0:
                raise DomainError(f"grid: invalid point (d={d}, n={n}, psi={psi})")


@dataclass(frozen=True)
class PowerCurvePoint:
    d: int
    n: int
    psi: float
    empirical_power: float
    mc_stderr: float
    theory_minimax: float
    theory_lda_approx: float
    theory_lda_expected: float
    rejections: int
    repetitions: int

    def row(self):
        return [self.d, self.n, repr(self.psi)] + [
            repr(float(getattr(self, c))) for c in CSV_COLUMNS[3:]
        ]


def _accuracy_stat(estimator, sigma, data):
    return 1.0 - estimator(data, sigma).e_hat


def run_test(scheme, data, sigma, level, perm_cfg=None, perm_stat="hotelling"):
    """Apply one named test to ``data``; returns a :class:`~clf2st.testing.TestOutcome`."""
    if scheme == "split-accuracy":
        return tst.test_split_accuracy(data, sigma, **level.kwargs())
    if scheme == "hotelling":
        return tst.test_hotelling(data, sigma, **level.kwargs())
    if scheme == "sd":
        return tst.test_sd(data, **level.kwargs())
    alpha = level.effective_alpha
    if perm_cfg is None:
        perm_cfg = tst.PermutationConfig()
    if scheme == "perm-method1":
        return tst.perm_test_method1(data, sigma, perm_cfg, alpha)
    if scheme == "perm-method2":
        return tst.perm_test_method2(data, sigma, perm_cfg, alpha)
    if scheme == "perm-direct":
        stat = {
            "hotelling": partial(_stat_hotelling, sigma),
            "split-accuracy": partial(_stat_split, sigma),
            "sd": tst.stat_sd,
        }[perm_stat]
        return tst.perm_test_direct(stat, data, perm_cfg, alpha)
    if scheme == "perm-loo":
        return tst.perm_test_direct(partial(_accuracy_stat, error_loo, sigma), data, perm_cfg, alpha)
    if scheme == "perm-resub":
        return tst.perm_test_direct(partial(_accuracy_stat, error_resub, sigma), data, perm_cfg, alpha)
    raise DomainError(f"unknown scheme {scheme!r}")


def _stat_hotelling(sigma, data):
    return tst.stat_hotelling(data, sigma)


def _stat_split(sigma, data):
    return tst.stat_split_accuracy(data, sigma)


def _count_rejections(spec, scheme, level, master_seed, point, start, stop, perm_p):
    hits = 0
    for r in range(start, stop):
        seed = SeedSpec(master_seed, r, (point,))
        data = sample(spec, seed)
        cfg = None
        if scheme.startswith("perm"):
            cfg = tst.PermutationConfig(perm_p or tst.DEFAULT_PERMUTATIONS, seed.child(1))
        hits += run_test(scheme, data, spec.sigma, level, cfg).reject
    return hits


def _chunks(R, workers):
    k = max(1, min(R, 4 * workers))
    bounds = [R * i // k for i in range(k + 1)]
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]


def _make_point(spec, level, hits, R):
    psi = snr(spec)
    p_hat = hits / R
    q = level.query(psi, spec.n, spec.d)
    return PowerCurvePoint(
        d=spec.d, n=spec.n, psi=psi,
        empirical_power=p_hat,
        mc_stderr=math.sqrt(p_hat * (1.0 - p_hat) / R),
        theory_minimax=minimax_power_lower_bound(q),
        theory_lda_approx=lda_power_approx(q),
        theory_lda_expected=lda_expected_power(q),
        rejections=hits,
        repetitions=R,
    )


def run_grid(specs, scheme, level, repetitions, master_seed, workers=1, permutation_p=None):
    """Estimate power at every problem in ``specs``; grid point ``k`` uses namespace ``(k,)``."""
    tasks = [
        (k, (spec, scheme, level, master_seed, k, a, b, permutation_p))
        for k, spec in enumerate(specs)
        for a, b in _chunks(repetitions, workers)
    ]
    hits = [0] * len(specs)
    if workers <= 1:
        for k, args in tasks:
            hits[k] += _count_rejections(*args)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [(k, ex.submit(_count_rejections, *args)) for k, args in tasks]
            for k, fut in futures:
                hits[k] += fut.result()
    return [_make_point(spec, level, h, repetitions) for spec, h in zip(specs, hits)]


def estimate_power(spec, scheme="split-accuracy", alpha=None, repetitions=PAPER_R, master_seed=0,
                   *, z_alpha=None, workers=1, permutation_p=None):
    """Empirical rejection rate of ``scheme`` over ``repetitions`` seeded datasets."""
    level = Level(alpha=alpha, z_alpha=z_alpha)
    return run_grid([spec], scheme, level, repetitions, master_seed, workers, permutation_p)[0]


def run_config(cfg, workers=1):
    specs = [spec_for_experiment(d, n, psi, cfg.direction) for d, n, psi in cfg.grid]
    return run_grid(specs, cfg.test_scheme, cfg.level, cfg.repetitions, cfg.master_seed,
                    workers, cfg.permutation_p)


def constant_power_grid():
    """``d = n = 20, 40, ..., 600`` with ``psi = 3 / d^(1/4)``."""
    return tuple((d, d, 3.0 / d ** 0.25) for d in range(20, 20 * GRID_SIZE + 1, 20))


def increasing_power_grid(fixed_d=None):
    """Thirty settings with ``psi_e = e / (10 d^(1/4))``.

    By default setting ``e`` uses ``d = n = 20 e``; with ``fixed_d`` every
    setting uses ``d = n = fixed_d``.
    """
    grid = []
    for e in range(1, GRID_SIZE + 1):
        d = fixed_d if fixed_d is not None else 20 * e
        grid.append((d, d, e / (10.0 * d ** 0.25)))
    return tuple(grid)


def experiment_constant_power(master_seed=0, repetitions=PAPER_R, workers=1):
    cfg = ExperimentConfig(constant_power_grid(), repetitions, master_seed=master_seed)
    return run_config(cfg, workers)


def experiment_increasing_power(master_seed=0, repetitions=PAPER_R, workers=1, fixed_d=None):
    cfg = ExperimentConfig(increasing_power_grid(fixed_d), repetitions, master_seed=master_seed)
    return run_config(cfg, workers)


def points_to_csv(points):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow(p.row())
    return buf.getvalue()


def points_to_json(points):
    return json.dumps([asdict(p) for p in points], indent=2) + "\n"
