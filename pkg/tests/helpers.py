"""Shared problem builders for the test suite."""

import numpy as np

from rowlasso import (
    GAUSSIAN,
    MULTINOMIAL,
    SimulationSpec,
    center_columns,
    center_design,
    gen_synthetic,
)


def gaussian_problem(seed, n, p, m, rho=0.2):
    """Centered Gaussian problem (design, response) from the synthetic generator."""
    spec = SimulationSpec(n=n, p=p, n_classes=m, rho=rho, seed=seed,
                          signal_rows=min(3, p))
    X, Y, _ = gen_synthetic(spec, family=GAUSSIAN)
    Xc, Yc, _, _ = center_columns(X, Y)
    return Xc, Yc


def multinomial_problem(seed, n, p, m, rho=0.2):
    """Centered-design multinomial problem (design, one-hot response).

    Regenerates with a shifted seed until every class is observed, so small
    test problems never carry empty classes.
    """
    for attempt in range(50):
        spec = SimulationSpec(n=n, p=p, n_classes=m, rho=rho,
                              seed=seed + 10_000 * attempt,
                              signal_rows=min(3, p))
        X, Y, _ = gen_synthetic(spec, family=MULTINOMIAL)
        if np.all(Y.values.sum(axis=0) > 0):
            Xc, _ = center_design(X)
            return Xc, Y
    raise RuntimeError("could not draw a problem with every class observed")
