"""Timing harness for path fits on synthetic multinomial problems.

Each configuration (n, p, classes, rho) is run for a number of trials with
fresh seeds; only the path fit itself is timed, not data generation.  Every
timed fit is KKT-verified at each penalty level, and the report records
whether all certificates passed.  Trials run serially by default so timings
do not fight each other for cores; pass ``jobs > 1`` to override.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import MULTINOMIAL
from .multinomial import MultinomialFitConfig
from .path import PathConfig, fit_path
from .simulate import SimulationSpec, gen_synthetic


@dataclass
class BenchRow:
    n: int
    p: int
    n_classes: int
    rho: float
    trials: int
    n_lambda: int
    mean_seconds: float
    max_seconds: float
    all_converged: bool
    all_kkt_certified: bool
    max_kkt_violation: float


@dataclass
class BenchReport:
    rows: list

    _COLUMNS = ("n", "p", "classes", "rho", "trials", "nlambda",
                "mean_s", "max_s", "converged", "kkt_ok", "max_kkt")

    def format_table(self):
        lines = ["  ".join(f"{c:>9}" for c in self._COLUMNS)]
        for r in self.rows:
            cells = (r.n, r.p, r.n_classes, f"{r.rho:g}", r.trials, r.n_lambda,
                     f"{r.mean_seconds:.3f}", f"{r.max_seconds:.3f}",
                     "yes" if r.all_converged else "NO",
                     "yes" if r.all_kkt_certified else "NO",
                     f"{r.max_kkt_violation:.2e}")
            lines.append("  ".join(f"{str(c):>9}" for c in cells))
        return "\n".join(lines)

    def write_csv(self, path):
        with open(path, "w") as handle:
            handle.write(",".join(self._COLUMNS) + "\n")
            for r in self.rows:
                handle.write(",".join(str(v) for v in (
                    r.n, r.p, r.n_classes, r.rho, r.trials, r.n_lambda,
                    repr(r.mean_seconds), repr(r.max_seconds),
                    r.all_converged, r.all_kkt_certified,
                    repr(r.max_kkt_violation),
                )) + "\n")


def _run_trial(args):
    n, p, n_classes, rho, seed, n_lambda, alpha, kkt_tol = args
    spec = SimulationSpec(n=n, p=p, n_classes=n_classes, rho=rho, seed=seed)
    X, Y, _ = gen_synthetic(spec, family=MULTINOMIAL)
    config = PathConfig(n_lambda=n_lambda, alpha=alpha, family=MULTINOMIAL)
    # generous outer budget so hard small-lambda fits still certify
    solver_config = MultinomialFitConfig(max_outer=1000)
    start = time.perf_counter()
    fit = fit_path(X, Y, config, multinomial_config=solver_config, kkt_tol=kkt_tol)
    elapsed = time.perf_counter() - start
    converged = all(pt.converged for pt in fit.points)
    max_kkt = max(pt.kkt_max_violation for pt in fit.points)
    return elapsed, converged, max_kkt


def run_bench(ns, ps, classes, rhos, trials=10, n_lambda=100, seed=0,
              alpha=1.0, kkt_tol=1e-4, jobs=1):
    """Time path fits over the cross product of the given configuration lists."""
    # warm the jit-compiled solver kernels so the first trial is not charged
    # for compilation
    _run_trial((20, 5, 2, 0.0, 0, 3, 1.0, kkt_tol))
    rows = []
    for index, (n, p, m, rho) in enumerate(itertools.product(ns, ps, classes, rhos)):
        trial_args = [
            (n, p, m, rho, seed + 1000 * index + t, n_lambda, alpha, kkt_tol)
            for t in range(trials)
        ]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_run_trial, trial_args))
        else:
            results = [_run_trial(args) for args in trial_args]
        times = [r[0] for r in results]
        max_kkt = max(r[2] for r in results)
        rows.append(BenchRow(
            n=n, p=p, n_classes=m, rho=rho, trials=trials, n_lambda=n_lambda,
            mean_seconds=sum(times) / len(times),
            max_seconds=max(times),
            all_converged=all(r[1] for r in results),
            all_kkt_certified=max_kkt <= kkt_tol,
            max_kkt_violation=max_kkt,
        ))
    return BenchReport(rows)
