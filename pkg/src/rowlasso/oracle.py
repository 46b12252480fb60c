"""Independent proximal-gradient reference solver used to certify the fits.

This solver is deliberately simple and slow: full-gradient descent with a
fixed 1/L step followed by the row-wise proximal map

    prox(v) = (1 / (1 + ridge)) * (1 - threshold / ||v||_2)_+ * v

applied to every penalized row.  It shares only the objective functions with
the coordinate-descent solvers; the descent logic is written independently so
that agreement between the two is evidence of correctness rather than a
tautology.

Steps: Gaussian uses 1/L with L the largest eigenvalue of X^T X.  Multinomial
uses 2/||X||_2^2, valid because every per-observation Hessian is dominated by
(1/2) I, and halves the step if the objective ever increases.  The multinomial
problem carries an unpenalized intercept, handled as an extra all-ones design
column whose coefficient row is never thresholded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    MULTINOMIAL,
    CoefficientMatrix,
    objective_gaussian,
    objective_multinomial,
)


@dataclass
class OracleConfig:
    """``tol`` is an absolute threshold on the per-iteration objective change,
    floored at the float64 resolution of the objective itself."""

    max_iter: int = 1_000_000
    tol: float = 1e-12

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")

    def settled(self, previous, current):
        floor = 4.0 * np.finfo(float).eps * abs(current)
        return abs(previous - current) <= max(self.tol, floor)


@dataclass
class OracleFit:
    coef: CoefficientMatrix
    iterations: int
    converged: bool
    final_objective: float
    objective_history: list


def prox_group_row(v, threshold, ridge):
    """Proximal map of threshold * ||.||_2 + ridge / 2 * ||.||_2^2 on one row."""
    v = np.asarray(v, dtype=float)
    if threshold < 0 or ridge < 0:
        raise ValueError("threshold and ridge must be nonnegative")
    vnorm = float(np.linalg.norm(v))
    if vnorm <= threshold:
        return np.zeros_like(v)
    return ((1.0 - threshold / vnorm) / (1.0 + ridge)) * v


def _prox_rows(V, threshold, ridge):
    norms = np.sqrt(np.einsum("ij,ij->i", V, V))
    factors = np.zeros_like(norms)
    above = norms > threshold
    factors[above] = (1.0 - threshold / norms[above]) / (1.0 + ridge)
    return factors[:, None] * V


def oracle_fit_gaussian(X, Y, spec, config=None):
    """Proximal gradient descent on the Gaussian objective (no intercept)."""
    if config is None:
        config = OracleConfig()
    Xv, Yv = X.values, Y.values
    n_features, n_responses = X.n_cols, Y.n_cols
    B = np.zeros((n_features, n_responses))

    singular = np.linalg.svd(Xv, compute_uv=False)
    lipschitz = float(singular[0] ** 2) if singular.size else 0.0
    if lipschitz <= 0.0:
        coef = CoefficientMatrix(B, np.zeros(n_responses))
        obj = objective_gaussian(X, Y, coef, spec)
        return OracleFit(coef, 0, True, obj, [obj])
    step = 1.0 / lipschitz

    coef = CoefficientMatrix(B, np.zeros(n_responses))
    objective = objective_gaussian(X, Y, coef, spec)
    history = [objective]
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        grad = Xv.T @ (Xv @ B - Yv)
        candidate = _prox_rows(
            B - step * grad,
            step * spec.lam * spec.alpha,
            step * spec.lam * (1.0 - spec.alpha),
        )
        new_objective = objective_gaussian(
            X, Y, CoefficientMatrix(candidate, np.zeros(n_responses)), spec
        )
        while new_objective > objective and step > 1e-30:
            step *= 0.5
            candidate = _prox_rows(
                B - step * grad,
                step * spec.lam * spec.alpha,
                step * spec.lam * (1.0 - spec.alpha),
            )
            new_objective = objective_gaussian(
                X, Y, CoefficientMatrix(candidate, np.zeros(n_responses)), spec
            )
        B = candidate
        history.append(new_objective)
        if config.settled(objective, new_objective):
            objective = new_objective
            converged = True
            break
        objective = new_objective

    return OracleFit(
        coef=CoefficientMatrix(B, np.zeros(n_responses)),
        iterations=iterations,
        converged=converged,
        final_objective=objective,
        objective_history=history,
    )


def oracle_fit_multinomial(X, Y, spec, config=None):
    """Proximal gradient descent on the multinomial objective.

    The unpenalized intercept rides along as the coefficient row of an
    all-ones column: it takes plain gradient steps while every other row goes
    through the group proximal map.
    """
    if config is None:
        config = OracleConfig()
    if Y.family != MULTINOMIAL:
        raise ValueError(f"oracle_fit_multinomial needs a multinomial response, got {Y.family!r}")
    Yv = Y.values
    n_features, n_classes = X.n_cols, Y.n_cols
    Xaug = np.hstack([np.ones((X.n_rows, 1)), X.values])
    Baug = np.zeros((n_features + 1, n_classes))

    lipschitz = float(np.linalg.svd(Xaug, compute_uv=False)[0] ** 2) / 2.0
    step = 1.0 / lipschitz

    def full_objective(Baug):
        return objective_multinomial(
            X, Y, CoefficientMatrix(Baug[1:], Baug[0]), spec
        )

    objective = full_objective(Baug)
    history = [objective]
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        probs = _softmax(Xaug @ Baug)
        grad = Xaug.T @ (probs - Yv)
        candidate = Baug - step * grad
        candidate[1:] = _prox_rows(
            candidate[1:],
            step * spec.lam * spec.alpha,
            step * spec.lam * (1.0 - spec.alpha),
        )
        new_objective = full_objective(candidate)
        while new_objective > objective and step > 1e-30:
            step *= 0.5
            candidate = Baug - step * grad
            candidate[1:] = _prox_rows(
                candidate[1:],
                step * spec.lam * spec.alpha,
                step * spec.lam * (1.0 - spec.alpha),
            )
            new_objective = full_objective(candidate)
        Baug = candidate
        history.append(new_objective)
        if config.settled(objective, new_objective):
            objective = new_objective
            converged = True
            break
        objective = new_objective

    return OracleFit(
        coef=CoefficientMatrix(Baug[1:], Baug[0]),
        iterations=iterations,
        converged=converged,
        final_objective=objective,
        objective_history=history,
    )


def _softmax(eta):
    shifted = np.exp(eta - np.max(eta, axis=1, keepdims=True))
    return shifted / shifted.sum(axis=1, keepdims=True)
