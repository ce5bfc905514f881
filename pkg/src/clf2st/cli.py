"""Command line interface.

Subcommands::

    clf2st test      --input data.csv --scheme split-accuracy --alpha 0.05 --sigma identity
    clf2st perm      --input data.csv --method 2 --P 199 --seed 1
    clf2st power     --d 100 --n 100 --psi 0.9 --z-alpha 2 --R 200
    clf2st theory    --d 100 --n 100 --psi 0 0.5 1 --alpha 0.05
    clf2st reproduce constant-power --seed 1 --out curve.csv

Exit status is 0 on success, 1 on runtime or validation errors and 2 on
usage errors.
"""

import argparse
import csv
import io
import itertools
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, kernels
from . import testing as tst
from .harness import (
    PAPER_R, PAPER_Z_ALPHA, SCHEMES, ExperimentConfig, Level, constant_power_grid,
    increasing_power_grid, points_to_csv, points_to_json, run_config, run_test,
)
from .model import SeedSpec, read_csv
from .numerics import SpdMatrix
from .theory import (
    lda_expected_power, lda_power_approx, low_snr_power, minimax_power_lower_bound,
)

THEORY_COLUMNS = (
    "d", "n", "psi", "alpha", "z_alpha", "theory_minimax", "theory_low_snr",
    "theory_lda_approx", "theory_lda_approx_low_snr", "theory_lda_expected",
)
OUTCOME_COLUMNS = ("scheme", "statistic", "threshold", "reject", "p_value", "alpha")


class CliError(Exception):
    """Validation failure reported with exit status 1."""


def load_sigma(text, d):
    """Parse ``identity``, ``diagonal:<path>`` or ``dense:<path>`` for a ``d``-dimensional problem."""
    if text == "identity":
        return SpdMatrix.identity(d)
    kind, sep, path = text.partition(":")
    if not sep or kind not in ("diagonal", "dense") or not path:
        raise CliError(f"--sigma: expected identity, diagonal:<path> or dense:<path>, got {text!r}")
    try:
        a = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise CliError(f"--sigma: cannot parse {path}: {exc}") from None
    if kind == "diagonal":
        if 1 in a.shape:
            v = a.ravel()
        elif a.shape[0] == a.shape[1] and not np.any(a - np.diag(np.diag(a))):
            v = np.diag(a)
        else:
            raise CliError(f"--sigma: {path} is neither a variance vector nor a diagonal matrix")
        a = np.diag(v)
    if a.shape != (d, d):
        raise CliError(f"--sigma: covariance is {a.shape[0]}x{a.shape[1]}, data have d={d}")
    return SpdMatrix(a)


def _level(args):
    if args.z_alpha is not None:
        return Level(z_alpha=args.z_alpha)
    return Level(alpha=args.alpha if args.alpha is not None else 0.05)


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_meta(args, extra=None):
    if not args.out:
        return
    meta = {
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "argv": sys.argv[1:],
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
    }
    meta.update(extra or {})
    Path(str(args.out) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def _table(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _outcome_text(args, outcome):
    if args.json:
        return json.dumps(asdict(outcome), indent=2) + "\n"
    return _table(OUTCOME_COLUMNS, [[
        outcome.scheme, repr(outcome.statistic), repr(outcome.threshold),
        int(outcome.reject), repr(outcome.p_value), repr(outcome.alpha),
    ]])


def cmd_test(args):
    data = read_csv(args.input)
    sigma = None if args.scheme == "sd" else load_sigma(args.sigma, data.d)
    outcome = run_test(args.scheme, data, sigma, _level(args))
    _emit(args, _outcome_text(args, outcome))


def cmd_perm(args):
    data = read_csv(args.input)
    sigma = load_sigma(args.sigma, data.d)
    cfg = tst.PermutationConfig(args.P, SeedSpec(args.seed))
    scheme = {"direct": "perm-direct", "1": "perm-method1", "2": "perm-method2"}[args.method]
    outcome = run_test(scheme, data, sigma, _level(args), cfg, perm_stat=args.stat)
    _emit(args, _outcome_text(args, outcome))


def _emit_points(args, points, cfg):
    _emit(args, points_to_json(points) if args.json else points_to_csv(points))
    _write_meta(args, {"config": {
        "repetitions": cfg.repetitions, "scheme": cfg.test_scheme, "master_seed": cfg.master_seed,
        "alpha": cfg.level.alpha, "z_alpha": cfg.level.z_alpha, "permutation_p": cfg.permutation_p,
        "direction": cfg.direction, "grid": [list(g) for g in cfg.grid],
    }, "workers": args.workers})


def cmd_power(args):
    cfg = ExperimentConfig(
        grid=((args.d, args.n, args.psi),), repetitions=args.R, level=_level(args),
        test_scheme=args.scheme, permutation_p=args.P, master_seed=args.seed,
        direction=args.direction,
    )
    _emit_points(args, run_config(cfg, args.workers), cfg)


def cmd_theory(args):
    if args.grid == "constant-power":
        grid = constant_power_grid()
    elif args.grid == "increasing-power":
        grid = increasing_power_grid(args.fixed_d)
    else:
        if not (args.d and args.n and args.psi):
            raise CliError("theory: give --d, --n and --psi, or --grid")
        grid = list(itertools.product(args.d, args.n, args.psi))
    level = _level(args)
    rows = []
    for d, n, psi in grid:
        q = level.query(psi, n, d)
        rows.append([
            d, n, repr(float(psi)), repr(q.alpha), repr(q.z_alpha),
            repr(minimax_power_lower_bound(q)), repr(low_snr_power(q)),
            repr(lda_power_approx(q)), repr(lda_power_approx(q, low_snr=True)),
            repr(lda_expected_power(q)) if n % 2 == 0 else "",
        ])
    if args.json:
        text = json.dumps([dict(zip(THEORY_COLUMNS, r)) for r in rows], indent=2) + "\n"
    else:
        text = _table(THEORY_COLUMNS, rows)
    _emit(args, text)


def cmd_reproduce(args):
    if args.experiment == "constant-power":
        grid = constant_power_grid()
    else:
        grid = increasing_power_grid(args.fixed_d)
    cfg = ExperimentConfig(grid, args.R, Level(z_alpha=PAPER_Z_ALPHA), master_seed=args.seed)
    _emit_points(args, run_config(cfg, args.workers), cfg)


def _common(p, seed=True):
    if seed:
        p.add_argument("--seed", type=_u64, default=0, help="master seed (unsigned 64-bit)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.add_argument("--workers", type=_positive, default=1, help="worker processes")


def _level_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, help="test level (default 0.05)")
    g.add_argument("--z-alpha", type=float, help="fixed normal cutoff instead of --alpha")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _u64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="clf2st", description="Two-sample mean testing via LDA classification accuracy.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run one analytic test on a labelled CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--scheme", choices=("split-accuracy", "hotelling", "sd"), default="split-accuracy")
    p.add_argument("--sigma", default="identity")
    _level_flags(p)
    _common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("perm", help="permutation test on a labelled CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("direct", "1", "2"), default="2")
    p.add_argument("--P", type=_positive, default=tst.DEFAULT_PERMUTATIONS)
    p.add_argument("--stat", choices=("hotelling", "split-accuracy", "sd"), default="hotelling",
                   help="statistic for --method direct")
    p.add_argument("--sigma", default="identity")
    _level_flags(p)
    _common(p)
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("power", help="Monte Carlo power at one configuration")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--psi", type=float, required=True)
    p.add_argument("--scheme", choices=SCHEMES, default="split-accuracy")
    p.add_argument("--R", type=_positive, default=PAPER_R)
    p.add_argument("--P", type=_positive, default=None, help="permutations for perm-* schemes")
    p.add_argument("--direction", choices=("uniform", "first-axis"), default="uniform")
    _level_flags(p)
    _common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("theory", help="closed-form power curves")
    p.add_argument("--d", type=_positive, nargs="+")
    p.add_argument("--n", type=_positive, nargs="+")
    p.add_argument("--psi", type=float, nargs="+")
    p.add_argument("--grid", choices=("constant-power", "increasing-power"))
    p.add_argument("--fixed-d", type=_positive)
    _level_flags(p)
    _common(p, seed=False)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("reproduce", help="rerun the constant- or increasing-power experiment")
    p.add_argument("experiment", choices=("constant-power", "increasing-power"))
    p.add_argument("--R", type=_positive, default=PAPER_R)
    p.add_argument("--fixed-d", type=_positive,
                   help="increasing-power: use d = n = FIXED_D for every setting")
    _common(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def run_cli(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (OSError, CliError, ValueError) as exc:
        print(f"clf2st: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
