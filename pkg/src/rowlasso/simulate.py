"""Synthetic benchmark problems with equicorrelated Gaussian features.

Feature rows are built as sqrt(rho) * z_i * 1^T + sqrt(1 - rho) * E_i with
z_i scalar standard normal and E_i a row of independent standard normals,
giving unit variance and pairwise correlation rho.  The true coefficient
matrix has iid N(0, signal_sd^2) entries in its first ``signal_rows`` rows and
exact zeros elsewhere.

Randomness comes from numpy's default PCG64 generator seeded from
``SimulationSpec.seed``, with a fixed draw order (shared factor, noise matrix,
signal entries, then response), so output is bit-reproducible for a fixed
seed across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GAUSSIAN, MULTINOMIAL, DesignMatrix, ResponseMatrix
from .multinomial import softmax_rows


@dataclass
class SimulationSpec:
    """Shape, correlation and signal of one synthetic problem."""

    n: int
    p: int
    n_classes: int
    rho: float = 0.0
    seed: int = 0
    signal_rows: int = 3
    signal_sd: float | None = None

    def __post_init__(self):
        if self.n < 1 or self.p < 1 or self.n_classes < 1:
            raise ValueError("n, p and n_classes must be positive")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must be in [0, 1), got {self.rho}")
        if not 0 <= self.signal_rows <= self.p:
            raise ValueError(f"signal_rows must be in [0, p], got {self.signal_rows}")
        if self.signal_sd is None:
            self.signal_sd = 2.0 / self.n_classes
        elif self.signal_sd < 0:
            raise ValueError(f"signal_sd must be nonnegative, got {self.signal_sd}")


def gen_synthetic(spec, family=MULTINOMIAL):
    """Generate (X, Y, true_beta) for the given family.

    Multinomial responses are sampled from the softmax of X @ true_beta;
    Gaussian responses are X @ true_beta plus standard normal noise.
    """
    rng = np.random.default_rng(spec.seed)
    shared = rng.standard_normal((spec.n, 1))
    noise = rng.standard_normal((spec.n, spec.p))
    x_values = np.sqrt(spec.rho) * shared + np.sqrt(1.0 - spec.rho) * noise

    beta = np.zeros((spec.p, spec.n_classes))
    if spec.signal_rows:
        beta[: spec.signal_rows] = rng.normal(
            0.0, spec.signal_sd, size=(spec.signal_rows, spec.n_classes)
        )
    eta = x_values @ beta

    if family == MULTINOMIAL:
        probs = softmax_rows(eta)
        cutoffs = probs.cumsum(axis=1)
        draws = rng.random(spec.n)
        labels = np.minimum(
            (draws[:, None] >= cutoffs).sum(axis=1), spec.n_classes - 1
        )
        Y = ResponseMatrix.from_labels(labels + 1, n_classes=spec.n_classes)
    elif family == GAUSSIAN:
        Y = ResponseMatrix(eta + rng.standard_normal(eta.shape), GAUSSIAN)
    else:
        raise ValueError(f"unknown family {family!r}")

    return DesignMatrix(x_values), Y, beta
