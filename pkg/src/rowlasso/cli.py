"""Command-line frontend: ``rowlasso fit`` and ``rowlasso bench``.

Exit codes: 0 on success, 2 on input errors (malformed files, inconsistent
dimensions, bad flags), 3 when the path completed but at least one penalty
level failed to converge (output is still written).
"""

from __future__ import annotations

import argparse
import sys

from .bench import run_bench
from .core import GAUSSIAN, MULTINOMIAL, DesignMatrix
from .gaussian import GaussianFitConfig
from .io import InputError, read_matrix_csv, read_response_csv, write_path_json
from .multinomial import MultinomialFitConfig
from .path import PathConfig, fit_path


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rowlasso",
        description="Row-grouped elastic-net paths for multiresponse and multinomial regression.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a regularization path from CSV inputs")
    fit.add_argument("--x", required=True, help="design matrix CSV (n rows, p columns)")
    fit.add_argument("--y", required=True,
                     help="response CSV: n x M (gaussian), or n x M one-hot / "
                          "single 1..M label column (multinomial)")
    fit.add_argument("--family", required=True, choices=[GAUSSIAN, MULTINOMIAL])
    fit.add_argument("--alpha", type=float, default=1.0,
                     help="elastic-net mixing weight in (0, 1]; 1 = pure group lasso")
    fit.add_argument("--nlambda", type=int, default=100)
    fit.add_argument("--lambda-min-ratio", type=float, default=0.05)
    fit.add_argument("--tol", type=float, default=None,
                     help="solver tolerance (coordinate cycles and, for the "
                          "multinomial family, the outer loop)")
    fit.add_argument("--max-iter", type=int, default=None,
                     help="cap on coordinate cycles per fit")
    fit.add_argument("--no-screen", action="store_true",
                     help="disable strong-rule screening (results are "
                          "KKT-certified either way)")
    fit.add_argument("--out", required=True, help="output JSON file")

    bench = sub.add_parser("bench", help="time synthetic multinomial path fits")
    bench.add_argument("--n", default="100", help="observations (comma-separated list)")
    bench.add_argument("--p", default="1000", help="features (comma-separated list)")
    bench.add_argument("--classes", default="5", help="class counts (comma-separated list)")
    bench.add_argument("--rho", default="0.0", help="equicorrelations (comma-separated list)")
    bench.add_argument("--trials", type=int, default=10)
    bench.add_argument("--nlambda", type=int, default=100)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--jobs", type=int, default=1,
                       help="trials in parallel (default serial, for clean timings)")
    bench.add_argument("--out", default=None, help="also write the table as CSV")
    return parser


def _int_list(text, flag):
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated integers, got {text!r}")


def _float_list(text, flag):
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated numbers, got {text!r}")


def _run_fit(args):
    X = DesignMatrix(read_matrix_csv(args.x))
    Y = read_response_csv(args.y, args.family)
    if X.n_rows != Y.n_rows:
        raise InputError(f"{args.x} has {X.n_rows} rows but {args.y} has {Y.n_rows}")

    config = PathConfig(
        n_lambda=args.nlambda,
        lambda_min_ratio=args.lambda_min_ratio,
        alpha=args.alpha,
        screening=not args.no_screen,
        family=args.family,
    )
    gaussian_kwargs = {}
    if args.tol is not None:
        gaussian_kwargs["tol"] = args.tol
    if args.max_iter is not None:
        gaussian_kwargs["max_cycles"] = args.max_iter
    gaussian_config = GaussianFitConfig(**gaussian_kwargs) if gaussian_kwargs else None
    multinomial_config = None
    if args.family == MULTINOMIAL and gaussian_config is not None:
        multinomial_config = MultinomialFitConfig(inner=gaussian_config)
        if args.tol is not None:
            multinomial_config.outer_tol = args.tol

    fit = fit_path(X, Y, config,
                   gaussian_config=gaussian_config,
                   multinomial_config=multinomial_config)
    write_path_json(fit, args.out)
    if not all(point.converged for point in fit.points):
        bad = sum(1 for point in fit.points if not point.converged)
        print(f"warning: {bad} of {len(fit.points)} penalty levels did not converge",
              file=sys.stderr)
        return 3
    return 0


def _run_bench(args):
    report = run_bench(
        ns=_int_list(args.n, "--n"),
        ps=_int_list(args.p, "--p"),
        classes=_int_list(args.classes, "--classes"),
        rhos=_float_list(args.rho, "--rho"),
        trials=args.trials,
        n_lambda=args.nlambda,
        seed=args.seed,
        jobs=args.jobs,
    )
    print(report.format_table())
    if args.out:
        report.write_csv(args.out)
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return _run_fit(args)
        return _run_bench(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run():
    raise SystemExit(main())
