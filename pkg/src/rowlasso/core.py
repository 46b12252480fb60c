"""Shared data model and objectives for row-grouped penalized multiresponse models.

Every estimator in this package fits a p x M coefficient matrix B plus an
unpenalized M-vector of intercepts by minimizing a smooth data loss plus the
row-grouped elastic-net penalty

    lam * alpha * sum_k ||B[k, :]||_2  +  lam * (1 - alpha) / 2 * ||B||_F^2

so a feature enters or leaves the model for all M responses (or classes)
jointly.  This module holds the containers shared by the coordinate-descent
solvers, the path engine and the proximal-gradient reference solver, together
with the objective functions they all report against.

All operations here are pure functions of immutable inputs and safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAUSSIAN = "gaussian"
MULTINOMIAL = "multinomial"
FAMILIES = (GAUSSIAN, MULTINOMIAL)


def _as_float_matrix(values, name):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


class DesignMatrix:
    """n x p design with cached per-column squared norms and column means.

    The squared column norms appear in every coordinate update, so they are
    computed once at construction and never recomputed inside solver loops.
    Values are stored column-major because the solvers walk the design one
    column at a time.
    """

    def __init__(self, values):
        values = np.asfortranarray(_as_float_matrix(values, "design matrix"))
        self.values = values
        self.n_rows, self.n_cols = values.shape
        self.col_sq_norms = np.einsum("ij,ij->j", values, values)
        self.col_means = values.mean(axis=0)

    def subset_columns(self, indices):
        """Restrict to the given columns, reusing the cached norms and means."""
        indices = np.asarray(indices, dtype=int)
        sub = object.__new__(DesignMatrix)
        sub.values = np.asfortranarray(self.values[:, indices])
        sub.n_rows = self.n_rows
        sub.n_cols = int(indices.size)
        sub.col_sq_norms = self.col_sq_norms[indices].copy()
        sub.col_means = self.col_means[indices].copy()
        return sub

    def __repr__(self):
        return f"DesignMatrix(n_rows={self.n_rows}, n_cols={self.n_cols})"


class ResponseMatrix:
    """n x M response matrix tagged with its family.

    Gaussian responses are arbitrary finite reals.  Multinomial responses are
    one-hot: entries in {0, 1} with exactly one 1 per row.
    """

    def __init__(self, values, family):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
        values = _as_float_matrix(values, "response matrix")
        if family == MULTINOMIAL:
            if not np.all((values == 0.0) | (values == 1.0)):
                raise ValueError("multinomial response entries must all be 0 or 1")
            if not np.all(values.sum(axis=1) == 1.0):
                raise ValueError("multinomial response rows must each contain exactly one 1")
        self.values = values
        self.family = family
        self.n_rows, self.n_cols = values.shape

    @classmethod
    def from_labels(cls, labels, n_classes=None):
        """Build a one-hot multinomial response from integer class labels 1..M."""
        labels = np.asarray(labels)
        if labels.ndim != 1:
            raise ValueError(f"labels must be 1-dimensional, got shape {labels.shape}")
        as_float = labels.astype(float)
        if not np.all(as_float == np.round(as_float)):
            raise ValueError("class labels must be integers")
        idx = np.round(as_float).astype(int)
        if idx.min() < 1:
            raise ValueError(f"class labels must be >= 1, got {idx.min()}")
        m = int(idx.max()) if n_classes is None else int(n_classes)
        if idx.max() > m:
            raise ValueError(f"label {idx.max()} exceeds n_classes={m}")
        values = np.zeros((idx.size, m))
        values[np.arange(idx.size), idx - 1] = 1.0
        return cls(values, MULTINOMIAL)

    def __repr__(self):
        return f"ResponseMatrix(n_rows={self.n_rows}, n_cols={self.n_cols}, family={self.family!r})"


@dataclass
class CoefficientMatrix:
    """Penalized p x M coefficients plus the unpenalized M-vector of intercepts."""

    beta: np.ndarray
    intercept: np.ndarray

    def __post_init__(self):
        self.beta = _as_float_matrix(self.beta, "coefficient matrix")
        intercept = np.asarray(self.intercept, dtype=float)
        if intercept.ndim != 1:
            raise ValueError(f"intercept must be 1-dimensional, got shape {intercept.shape}")
        if intercept.shape[0] != self.beta.shape[1]:
            raise ValueError(
                f"intercept length {intercept.shape[0]} does not match "
                f"{self.beta.shape[1]} coefficient columns"
            )
        if not np.all(np.isfinite(intercept)):
            raise ValueError("intercept contains non-finite entries")
        self.intercept = intercept

    @classmethod
    def zeros(cls, n_features, n_responses):
        return cls(np.zeros((n_features, n_responses)), np.zeros(n_responses))

    def copy(self):
        return CoefficientMatrix(self.beta.copy(), self.intercept.copy())

    @property
    def n_features(self):
        return self.beta.shape[0]

    @property
    def n_responses(self):
        return self.beta.shape[1]


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty level ``lam`` and elastic-net mixing weight ``alpha``.

    ``alpha = 1`` is the pure row-group lasso; smaller values trade part of
    the group penalty for a ridge term.
    """

    lam: float
    alpha: float = 1.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass
class KKTReport:
    """Subgradient-optimality certificate over all coefficient rows.

    ``max_violation`` is scaled by the gradient magnitude of the null model
    (``scale``, the alpha-weighted largest row score at B = 0), so values are
    comparable across problems; ``violating_rows`` lists the rows whose scaled
    violation exceeds ``tol``.
    """

    max_violation: float
    max_violation_raw: float
    scale: float
    violating_rows: np.ndarray
    tol: float


def _coef_rows(coef_or_beta):
    if isinstance(coef_or_beta, CoefficientMatrix):
        return coef_or_beta.beta
    return np.asarray(coef_or_beta, dtype=float)


def row_group_norms(coef_or_beta):
    """Euclidean norm of every coefficient row (the penalized groups)."""
    beta = _coef_rows(coef_or_beta)
    return np.sqrt(np.einsum("ij,ij->i", beta, beta))


def penalty_value(coef_or_beta, spec):
    """Row-grouped elastic-net penalty; intercepts are never penalized."""
    beta = _coef_rows(coef_or_beta)
    value = spec.lam * spec.alpha * row_group_norms(beta).sum()
    if spec.alpha != 1.0:
        value += 0.5 * spec.lam * (1.0 - spec.alpha) * float(np.einsum("ij,ij->", beta, beta))
    return float(value)


def linear_predictor(X, coef):
    """Fitted values 1 * intercept^T + X B."""
    return coef.intercept + X.values @ coef.beta


def _check_dims(X, Y, coef):
    if X.n_rows != Y.n_rows:
        raise ValueError(f"X has {X.n_rows} rows but Y has {Y.n_rows}")
    if coef.n_features != X.n_cols:
        raise ValueError(f"coefficients have {coef.n_features} rows but X has {X.n_cols} columns")
    if coef.n_responses != Y.n_cols:
        raise ValueError(f"coefficients have {coef.n_responses} columns but Y has {Y.n_cols}")


def objective_gaussian(X, Y, coef, spec):
    """Penalized residual sum of squares: 0.5 ||Y - 1 b^T - X B||_F^2 + penalty."""
    _check_dims(X, Y, coef)
    resid = Y.values - linear_predictor(X, coef)
    return 0.5 * float(np.einsum("ij,ij->", resid, resid)) + penalty_value(coef, spec)


def log_sum_exp_rows(eta):
    """Per-row log(sum(exp(eta))), stabilized by subtracting the row maximum."""
    top = np.max(eta, axis=1)
    return top + np.log(np.exp(eta - top[:, None]).sum(axis=1))


def neg_log_likelihood_multinomial(eta, y_values):
    """Multinomial negative log-likelihood of the linear predictor eta."""
    return float((log_sum_exp_rows(eta) - np.einsum("ij,ij->i", y_values, eta)).sum())


def objective_multinomial(X, Y, coef, spec):
    """Penalized multinomial deviance: -loglik(1 b^T + X B) + penalty."""
    if Y.family != MULTINOMIAL:
        raise ValueError(f"objective_multinomial needs a multinomial response, got {Y.family!r}")
    _check_dims(X, Y, coef)
    eta = linear_predictor(X, coef)
    return neg_log_likelihood_multinomial(eta, Y.values) + penalty_value(coef, spec)


def center_columns(X, Y):
    """Mean-center the columns of a Gaussian problem.

    Returns the centered design and response plus the removed means, which the
    caller uses to recover intercepts on the original scale.  Constant columns
    become all-zero and are handled downstream (a zero column can never enter
    the model).
    """
    if Y.family != GAUSSIAN:
        raise ValueError("center_columns applies to the gaussian family; "
                         "multinomial problems center the design only")
    Xc, x_means = center_design(X)
    y_means = Y.values.mean(axis=0)
    Yc = ResponseMatrix(Y.values - y_means, GAUSSIAN)
    return Xc, Yc, x_means, y_means


def center_design(X):
    """Mean-center the design columns; returns (centered design, column means)."""
    x_means = X.col_means.copy()
    return DesignMatrix(X.values - x_means), x_means
