"""Regularization-path engine: grid construction, screening and KKT repair.

A path starts at lambda_max, the smallest penalty at which the all-zero
coefficient matrix is optimal, and descends geometrically to
lambda_min_ratio * lambda_max.  Each solution warm-starts the next.  With
screening on, the strong rule discards rows whose previous-residual score
||X_k^T R(lambda_prev)||_2 is at most alpha * (2 * lambda_j - lambda_prev)
before solving; the rule is a heuristic, not a guarantee, so every solution is
then checked against the KKT conditions over all rows and re-solved with any
violating rows restored until the certificate is clean.

Fits are performed on internally centered data; reported coefficients carry
intercepts translated back to the original scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FAMILIES,
    GAUSSIAN,
    MULTINOMIAL,
    CoefficientMatrix,
    DesignMatrix,
    PenaltySpec,
    ResponseMatrix,
    center_columns,
    center_design,
)
from .gaussian import (
    GaussianFitConfig,
    _column_score_sq_norms,
    fit_gaussian,
    kkt_check_gaussian,
)
from .multinomial import (
    MultinomialFitConfig,
    fit_multinomial,
    kkt_check_multinomial,
    softmax_rows,
)


@dataclass
class PathConfig:
    """Grid, penalty mixing and screening switches for one path run."""

    n_lambda: int = 100
    lambda_min_ratio: float = 0.05
    alpha: float = 1.0
    screening: bool = True
    family: str = GAUSSIAN

    def __post_init__(self):
        if self.n_lambda < 1:
            raise ValueError(f"n_lambda must be >= 1, got {self.n_lambda}")
        if not 0.0 < self.lambda_min_ratio < 1.0:
            raise ValueError(
                f"lambda_min_ratio must be in (0, 1), got {self.lambda_min_ratio}"
            )
        if not 0.0 < self.alpha <= 1.0:
            # alpha = 0 leaves lambda_max undefined (no group threshold at all)
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")


@dataclass
class PathPoint:
    """One solved penalty level with its diagnostics."""

    lam: float
    coef: CoefficientMatrix
    n_active: int
    iterations: int
    inner_cycles: int
    converged: bool
    kkt_max_violation: float
    screened_size: int
    n_kkt_repairs: int


@dataclass
class PathFit:
    family: str
    alpha: float
    lambdas: np.ndarray
    points: list
    x_means: np.ndarray
    y_means: np.ndarray | None


def lambda_max(X, Y, family, alpha):
    """Smallest penalty at which the zero coefficient matrix satisfies KKT.

    Gaussian: max_k ||X_k^T (Y - 1 ybar^T)||_2 / alpha.  Multinomial:
    max_k ||X_k^T (Y - P0)||_2 / alpha with P0 the matrix of sample class
    proportions.  ``X`` is expected to be column-centered.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    # Column means of Y are ybar (gaussian) and the class proportions
    # (multinomial, one-hot rows), so the null prediction is one expression.
    # Scores come from the solver's own accumulation kernel so the threshold
    # comparison in the first fits is exact.
    delta = np.ascontiguousarray(Y.values - Y.values.mean(axis=0))
    scores_sq = _column_score_sq_norms(X.values, delta)
    return float(np.sqrt(scores_sq.max())) / alpha


def lambda_grid(lam_max, config):
    """Geometric grid of ``n_lambda`` values from lambda_max down to
    lambda_min_ratio * lambda_max, both endpoints included."""
    if lam_max <= 0:
        raise ValueError(f"lambda_max must be positive, got {lam_max}")
    if config.n_lambda == 1:
        return np.array([lam_max])
    exponents = np.arange(config.n_lambda) / (config.n_lambda - 1)
    return lam_max * config.lambda_min_ratio ** exponents


def strong_rule_screen(X, residual_prev, lam, lam_prev, alpha, always_keep=None):
    """Candidate rows surviving the sequential strong rule.

    Keeps rows with ||X_k^T residual_prev||_2 > alpha * (2 * lam - lam_prev);
    a nonpositive threshold keeps everything.  Rows in ``always_keep``
    (typically the warm start's nonzero rows) are always retained.
    """
    scores = X.values.T @ residual_prev
    score_norms = np.sqrt(np.einsum("ij,ij->i", scores, scores))
    keep = score_norms > alpha * (2.0 * lam - lam_prev)
    if always_keep is not None:
        keep[np.asarray(always_keep, dtype=int)] = True
    return np.flatnonzero(keep)


def _null_multinomial_intercept(Y):
    proportions = Y.values.mean(axis=0)
    if np.any(proportions == 0.0):
        missing = np.flatnonzero(proportions == 0.0) + 1
        raise ValueError(f"classes {missing.tolist()} have no observations")
    intercept = np.log(proportions)
    return intercept - intercept.mean()


def fit_path(X, Y, config, gaussian_config=None, multinomial_config=None, kkt_tol=1e-4):
    """Fit the full regularization path with warm starts and KKT repair.

    Parameters
    ----------
    X : DesignMatrix or array-like, uncentered
    Y : ResponseMatrix or array-like (interpreted per ``config.family``)
    config : PathConfig
    gaussian_config : GaussianFitConfig, optional
        Inner solver controls (also used inside multinomial subproblems).
    multinomial_config : MultinomialFitConfig, optional
    kkt_tol : float
        Scaled violation level above which a row counts as violating and is
        restored by the repair loop.

    Every reported solution carries a KKT certificate computed over all rows,
    whether or not screening was active.  Per-lambda non-convergence is
    recorded in the point diagnostics without aborting the path.
    """
    if not isinstance(X, DesignMatrix):
        X = DesignMatrix(X)
    if not isinstance(Y, ResponseMatrix):
        Y = ResponseMatrix(Y, config.family)
    if Y.family != config.family:
        raise ValueError(f"response family {Y.family!r} does not match config {config.family!r}")
    if X.n_rows != Y.n_rows:
        raise ValueError(f"X has {X.n_rows} rows but Y has {Y.n_rows}")

    family = config.family
    if family == GAUSSIAN:
        Xc, Yfit, x_means, y_means = center_columns(X, Y)
        if gaussian_config is None:
            gaussian_config = GaussianFitConfig()
    else:
        Xc, x_means = center_design(X)
        Yfit = Y
        y_means = None
        if multinomial_config is None:
            multinomial_config = MultinomialFitConfig()
            if gaussian_config is not None:
                multinomial_config.inner = gaussian_config
        null_intercept = _null_multinomial_intercept(Y)

    lam_top = lambda_max(Xc, Yfit, family, config.alpha)
    if lam_top <= 0:
        raise ValueError("lambda_max is zero: the response carries no signal for any row")
    lambdas = lambda_grid(lam_top, config)

    n_features, n_responses = Xc.n_cols, Yfit.n_cols
    B = np.zeros((n_features, n_responses))
    b_model = np.zeros(n_responses)
    residual_prev = None
    points = []

    for j, lam in enumerate(lambdas):
        spec = PenaltySpec(float(lam), config.alpha)
        if j == 0:
            keep = np.empty(0, dtype=int)
        elif config.screening:
            warm_active = np.flatnonzero(np.einsum("ij,ij->i", B, B))
            keep = strong_rule_screen(
                Xc, residual_prev, float(lam), float(lambdas[j - 1]),
                config.alpha, always_keep=warm_active,
            )
        else:
            keep = np.arange(n_features)
        screened_size = int(keep.size)

        n_repairs = 0
        while True:
            B, b_model, iterations, inner_cycles, converged = _fit_subset(
                Xc, Yfit, spec, keep, B, b_model, family,
                gaussian_config, multinomial_config,
                null_intercept if family == MULTINOMIAL else None,
            )
            coef_model = CoefficientMatrix(B, b_model)
            if family == GAUSSIAN:
                report = kkt_check_gaussian(Xc, Yfit, coef_model, spec, tol=kkt_tol)
            else:
                report = kkt_check_multinomial(Xc, Yfit, coef_model, spec, tol=kkt_tol)
            new_rows = np.setdiff1d(report.violating_rows, keep)
            if new_rows.size == 0 or keep.size == n_features:
                break
            keep = np.union1d(keep, new_rows)
            n_repairs += 1

        intercept = b_model - B.T @ x_means
        if family == GAUSSIAN:
            intercept = intercept + y_means
        points.append(PathPoint(
            lam=float(lam),
            coef=CoefficientMatrix(B.copy(), intercept),
            n_active=int(np.count_nonzero(np.einsum("ij,ij->i", B, B))),
            iterations=iterations,
            inner_cycles=inner_cycles,
            converged=converged,
            kkt_max_violation=report.max_violation,
            screened_size=screened_size,
            n_kkt_repairs=n_repairs,
        ))

        if j + 1 < len(lambdas):
            if family == GAUSSIAN:
                residual_prev = Yfit.values - Xc.values @ B
            else:
                residual_prev = Yfit.values - softmax_rows(b_model + Xc.values @ B)

    return PathFit(
        family=family,
        alpha=config.alpha,
        lambdas=lambdas,
        points=points,
        x_means=x_means,
        y_means=y_means,
    )


def _fit_subset(Xc, Y, spec, keep, B_warm, b_warm, family,
                gaussian_config, multinomial_config, null_intercept):
    """Solve one penalty level on the screened row set; rows outside ``keep``
    are hard zeros.  An empty set yields the exact null solution."""
    n_features, n_responses = B_warm.shape
    if keep.size == 0:
        B = np.zeros((n_features, n_responses))
        if family == GAUSSIAN:
            return B, np.zeros(n_responses), 0, 0, True
        return B, null_intercept.copy(), 0, 0, True

    Xs = Xc.subset_columns(keep)
    if family == GAUSSIAN:
        fit = fit_gaussian(
            Xs, Y, spec,
            init=CoefficientMatrix(B_warm[keep], np.zeros(n_responses)),
            config=gaussian_config,
        )
        iterations = fit.cycles
        inner_cycles = fit.cycles
        b_model = np.zeros(n_responses)
    else:
        fit = fit_multinomial(
            Xs, Y, spec,
            init=CoefficientMatrix(B_warm[keep], b_warm),
            config=multinomial_config,
        )
        iterations = fit.outer_iterations
        inner_cycles = fit.inner_cycles
        b_model = fit.coef.intercept
    B = np.zeros((n_features, n_responses))
    B[keep] = fit.coef.beta
    return B, b_model, iterations, inner_cycles, fit.converged
