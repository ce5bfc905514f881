"""Compare the compiled and numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py --d 100 --n 100 --P 199 --repeat 5

Each kernel is timed on identical inputs for every available backend; the
table reports the best of ``--repeat`` runs and checks the outputs agree.
"""

import argparse
import time

import numpy as np

from clf2st import kernels
from clf2st.model import ProblemSpec, SeedSpec, sample
from clf2st.numerics import SpdMatrix


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(d, n, P, dense, seed):
    rng = np.random.default_rng(seed)
    if dense:
        b = rng.standard_normal((d, d)) / np.sqrt(d)
        sigma = SpdMatrix(b @ b.T + np.eye(d))
        chol = sigma.chol
    else:
        sigma, chol = SpdMatrix.identity(d), None
    data = sample(ProblemSpec(d, n, np.zeros(d), np.full(d, 0.1), sigma), SeedSpec(seed))
    perms = np.argsort(rng.random((P, 2 * n)), axis=1)
    held = np.argsort(rng.random((P, n)), axis=1)
    scores = rng.standard_normal(n)
    return {
        "split_error_counts": lambda k: k.split_error_counts(data.x, data.y, chol),
        "loo_error_counts": lambda k: k.loo_error_counts(data.x, data.y, chol),
        "retrain_error_counts": lambda k: k.retrain_error_counts(data.pooled(), perms, chol),
        "fixed_rule_error_counts": lambda k: k.fixed_rule_error_counts(scores, held),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=100)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--P", type=int, default=199)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dense", action="store_true", help="use a dense covariance instead of the identity")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    print(f"d={args.d} n={args.n} P={args.P} sigma={'dense' if args.dense else 'identity'}; "
          f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<26}" + "".join(f"{b + ' (ms)':>16}" for b in backends) + f"{'speedup':>10}  agree")
    for name, call in cases(args.d, args.n, args.P, args.dense, args.seed).items():
        times, outs = [], []
        for b in backends:
            t, out = best_time(lambda: call(kernels.get_backend(b)), args.repeat)
            times.append(t)
            outs.append(np.asarray(out))
        agree = all(np.array_equal(outs[0], o) for o in outs[1:])
        speed = f"{times[backends.index('python')] / times[0]:.1f}x" if len(backends) > 1 else "-"
        print(f"{name:<26}" + "".join(f"{1e3 * t:>16.3f}" for t in times) + f"{speed:>10}  {agree}")


if __name__ == "__main__":
    main()
