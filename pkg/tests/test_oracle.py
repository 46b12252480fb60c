"""Reference-solver tests: proximal map values, monotonicity, certificates."""

import numpy as np
import numpy.testing as npt
import pytest

from rowlasso import (
    GAUSSIAN,
    MULTINOMIAL,
    DesignMatrix,
    OracleConfig,
    PenaltySpec,
    ResponseMatrix,
    kkt_check_gaussian,
    kkt_check_multinomial,
    lambda_max,
    oracle_fit_gaussian,
    oracle_fit_multinomial,
    prox_group_row,
)

from helpers import gaussian_problem, multinomial_problem


class TestProxGroupRow:
    def test_at_threshold(self):
        npt.assert_array_equal(prox_group_row([3.0, 4.0], 5.0, 0.0), [0.0, 0.0])

    def test_shrinks_below_threshold(self):
        npt.assert_allclose(prox_group_row([3.0, 4.0], 2.5, 0.0), [1.5, 2.0], rtol=1e-15)

    def test_pure_ridge_halves(self):
        npt.assert_allclose(prox_group_row([3.0, 4.0], 0.0, 1.0), [1.5, 2.0], rtol=1e-15)

    def test_negative_parameters_rejected(self):
        with pytest.raises(ValueError):
            prox_group_row([1.0], -0.1, 0.0)

    def test_is_the_prox_of_the_row_penalty(self):
        # argmin_b 0.5||b - v||^2 + tau||b|| + rho/2||b||^2, checked by grid
        rng = np.random.default_rng(0)
        v = rng.standard_normal(2)
        tau, rho = 0.4, 0.3
        best = prox_group_row(v, tau, rho)

        def objective(b):
            return (0.5 * ((b - v) ** 2).sum()
                    + tau * np.linalg.norm(b) + 0.5 * rho * (b ** 2).sum())

        for _ in range(200):
            trial = best + rng.normal(0.0, 1e-3, 2)
            assert objective(best) <= objective(trial) + 1e-12


class TestOracleGaussian:
    def test_zero_at_lambda_max(self):
        Xc, Yc = gaussian_problem(1, n=20, p=6, m=2)
        lam = lambda_max(Xc, Yc, GAUSSIAN, 1.0)
        fit = oracle_fit_gaussian(Xc, Yc, PenaltySpec(lam * (1.0 + 1e-10), 1.0))
        assert not np.any(fit.coef.beta)

    def test_scalar_soft_threshold(self):
        X = DesignMatrix([[1.0]])
        Y = ResponseMatrix([[2.0]], GAUSSIAN)
        fit = oracle_fit_gaussian(X, Y, PenaltySpec(1.0, 1.0))
        assert fit.coef.beta[0, 0] == pytest.approx(1.0, abs=1e-9)

    def test_objective_monotone(self):
        Xc, Yc = gaussian_problem(2, n=25, p=10, m=3)
        lam = 0.3 * lambda_max(Xc, Yc, GAUSSIAN, 1.0)
        fit = oracle_fit_gaussian(Xc, Yc, PenaltySpec(lam, 1.0))
        history = np.asarray(fit.objective_history)
        assert np.all(np.diff(history) <= 0.0)
        assert fit.converged

    def test_output_satisfies_kkt(self):
        Xc, Yc = gaussian_problem(3, n=22, p=8, m=2)
        spec = PenaltySpec(0.4 * lambda_max(Xc, Yc, GAUSSIAN, 0.5), 0.5)
        fit = oracle_fit_gaussian(Xc, Yc, spec)
        report = kkt_check_gaussian(Xc, Yc, fit.coef, spec)
        assert report.max_violation <= 1e-6

    def test_zero_design_returns_zero(self):
        X = DesignMatrix(np.zeros((4, 2)))
        Y = ResponseMatrix(np.ones((4, 2)), GAUSSIAN)
        fit = oracle_fit_gaussian(X, Y, PenaltySpec(1.0, 1.0))
        assert not np.any(fit.coef.beta)
        assert fit.converged


class TestOracleMultinomial:
    def test_zero_rows_at_lambda_max(self):
        Xc, Y = multinomial_problem(4, n=30, p=5, m=3)
        lam = lambda_max(Xc, Y, MULTINOMIAL, 1.0)
        fit = oracle_fit_multinomial(Xc, Y, PenaltySpec(lam, 1.0))
        assert np.abs(fit.coef.beta).max() <= 1e-10

    def test_objective_monotone(self):
        Xc, Y = multinomial_problem(5, n=25, p=6, m=3)
        lam = 0.3 * lambda_max(Xc, Y, MULTINOMIAL, 1.0)
        fit = oracle_fit_multinomial(Xc, Y, PenaltySpec(lam, 1.0))
        history = np.asarray(fit.objective_history)
        assert np.all(np.diff(history) <= 0.0)
        assert fit.converged

    def test_symmetric_two_class_solution(self):
        rng = np.random.default_rng(6)
        X0 = rng.standard_normal((18, 3)) + 0.5
        Xv = np.vstack([X0, -X0])
        labels = np.concatenate([np.ones(18, dtype=int), np.full(18, 2, dtype=int)])
        X, Y = DesignMatrix(Xv), ResponseMatrix.from_labels(labels)
        lam = 0.3 * lambda_max(X, Y, MULTINOMIAL, 1.0)
        fit = oracle_fit_multinomial(X, Y, PenaltySpec(lam, 1.0))
        npt.assert_allclose(fit.coef.beta[:, 0], -fit.coef.beta[:, 1], atol=1e-7)

    def test_output_satisfies_kkt(self):
        Xc, Y = multinomial_problem(7, n=24, p=5, m=3)
        spec = PenaltySpec(0.4 * lambda_max(Xc, Y, MULTINOMIAL, 1.0), 1.0)
        fit = oracle_fit_multinomial(Xc, Y, spec)
        report = kkt_check_multinomial(Xc, Y, fit.coef, spec)
        assert report.max_violation <= 1e-6

    def test_max_iter_exhaustion_flagged(self):
        Xc, Y = multinomial_problem(8, n=20, p=4, m=3)
        spec = PenaltySpec(0.2 * lambda_max(Xc, Y, MULTINOMIAL, 1.0), 1.0)
        fit = oracle_fit_multinomial(Xc, Y, spec, OracleConfig(max_iter=3))
        assert not fit.converged
        assert fit.iterations == 3
