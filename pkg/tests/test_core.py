"""Data model, centering, penalty and objective tests."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from rowlasso import (
    GAUSSIAN,
    MULTINOMIAL,
    CoefficientMatrix,
    DesignMatrix,
    PenaltySpec,
    ResponseMatrix,
    center_columns,
    objective_gaussian,
    objective_multinomial,
    penalty_value,
    row_group_norms,
)


class TestDesignMatrix:
    def test_cached_norms_match_recomputation(self):
        rng = np.random.default_rng(0)
        X = DesignMatrix(rng.standard_normal((17, 9)))
        exact = (X.values ** 2).sum(axis=0)
        npt.assert_allclose(X.col_sq_norms, exact, rtol=1e-12)
        npt.assert_allclose(X.col_means, X.values.mean(axis=0), rtol=1e-12)

    def test_subset_reuses_caches(self):
        rng = np.random.default_rng(1)
        X = DesignMatrix(rng.standard_normal((10, 6)))
        sub = X.subset_columns([4, 1])
        npt.assert_array_equal(sub.values, X.values[:, [4, 1]])
        npt.assert_array_equal(sub.col_sq_norms, X.col_sq_norms[[4, 1]])
        assert sub.n_cols == 2 and sub.n_rows == 10

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            DesignMatrix([[1.0, np.nan], [0.0, 1.0]])

    def test_rejects_wrong_ndim(self):
        with pytest.raises(ValueError, match="2-dimensional"):
            DesignMatrix([1.0, 2.0])


class TestResponseMatrix:
    def test_multinomial_must_be_one_hot(self):
        with pytest.raises(ValueError, match="0 or 1"):
            ResponseMatrix([[0.5, 0.5]], MULTINOMIAL)
        with pytest.raises(ValueError, match="exactly one 1"):
            ResponseMatrix([[1.0, 1.0]], MULTINOMIAL)

    def test_from_labels(self):
        Y = ResponseMatrix.from_labels([1, 3, 2, 3])
        npt.assert_array_equal(
            Y.values,
            [[1, 0, 0], [0, 0, 1], [0, 1, 0], [0, 0, 1]],
        )
        with pytest.raises(ValueError, match=">= 1"):
            ResponseMatrix.from_labels([0, 1])
        with pytest.raises(ValueError, match="integers"):
            ResponseMatrix.from_labels([1.5, 2.0])

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError, match="family"):
            ResponseMatrix([[1.0]], "poisson")


class TestPenaltySpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            PenaltySpec(-1.0)
        with pytest.raises(ValueError):
            PenaltySpec(1.0, alpha=1.5)
        PenaltySpec(0.0, alpha=0.0)  # boundary values allowed


class TestCenterColumns:
    def test_basic_column(self):
        X = DesignMatrix(np.array([[1.0], [2.0], [3.0]]))
        Y = ResponseMatrix(np.array([[0.0], [0.0], [0.0]]), GAUSSIAN)
        Xc, Yc, x_means, y_means = center_columns(X, Y)
        npt.assert_array_equal(Xc.values[:, 0], [-1.0, 0.0, 1.0])
        assert x_means[0] == 2.0

    def test_centered_column_unchanged(self):
        X = DesignMatrix(np.array([[-1.0], [1.0]]))
        Y = ResponseMatrix(np.array([[5.0], [7.0]]), GAUSSIAN)
        Xc, _, x_means, _ = center_columns(X, Y)
        npt.assert_array_equal(Xc.values, X.values)
        assert x_means[0] == 0.0

    def test_constant_column_becomes_zero(self):
        X = DesignMatrix(np.array([[5.0], [5.0], [5.0]]))
        Y = ResponseMatrix(np.zeros((3, 1)), GAUSSIAN)
        Xc, _, x_means, _ = center_columns(X, Y)
        npt.assert_array_equal(Xc.values[:, 0], [0.0, 0.0, 0.0])
        assert x_means[0] == 5.0

    def test_post_condition_zero_means(self):
        rng = np.random.default_rng(5)
        X = DesignMatrix(rng.normal(3.0, 2.0, (40, 7)))
        Y = ResponseMatrix(rng.normal(-1.0, 4.0, (40, 3)), GAUSSIAN)
        Xc, Yc, _, _ = center_columns(X, Y)
        scale = np.abs(X.values).max()
        assert np.abs(Xc.values.mean(axis=0)).max() <= 1e-12 * scale
        assert np.abs(Yc.values.mean(axis=0)).max() <= 1e-12 * np.abs(Y.values).max()

    def test_rejects_multinomial(self):
        X = DesignMatrix(np.ones((2, 1)))
        Y = ResponseMatrix([[1.0, 0.0], [0.0, 1.0]], MULTINOMIAL)
        with pytest.raises(ValueError, match="gaussian"):
            center_columns(X, Y)


class TestRowGroupNorms:
    def test_values(self):
        beta = np.array([[0.0, 0.0], [3.0, 4.0], [1.0, 1.0]])
        npt.assert_allclose(row_group_norms(beta), [0.0, 5.0, math.sqrt(2.0)])

    def test_four_ones(self):
        assert row_group_norms(np.ones((1, 4)))[0] == 2.0


class TestPenaltyValue:
    def test_zero_matrix(self):
        coef = CoefficientMatrix.zeros(4, 3)
        assert penalty_value(coef, PenaltySpec(2.0, 0.3)) == 0.0

    def test_pure_group_lasso_row(self):
        beta = np.array([[3.0, 4.0]])
        assert penalty_value(beta, PenaltySpec(2.0, 1.0)) == 10.0

    def test_elastic_net_row(self):
        beta = np.array([[3.0, 4.0]])
        # 0.5*2*5 + 0.5*(2/2)*25 = 5 + 12.5
        assert penalty_value(beta, PenaltySpec(2.0, 0.5)) == pytest.approx(17.5, rel=1e-15)

    def test_alpha_one_equals_lam_times_norm_sum(self):
        rng = np.random.default_rng(2)
        beta = rng.standard_normal((6, 4))
        spec = PenaltySpec(1.7, 1.0)
        expected = 1.7 * row_group_norms(beta).sum()
        assert penalty_value(beta, spec) == expected

    def test_intercept_excluded(self):
        coef = CoefficientMatrix(np.zeros((2, 2)), np.array([5.0, -3.0]))
        assert penalty_value(coef, PenaltySpec(4.0, 0.5)) == 0.0


class TestObjectiveGaussian:
    def test_null_model_is_half_centered_tss(self):
        rng = np.random.default_rng(3)
        X = DesignMatrix(rng.standard_normal((25, 4)))
        Y = ResponseMatrix(rng.normal(2.0, 3.0, (25, 2)), GAUSSIAN)
        coef = CoefficientMatrix(np.zeros((4, 2)), Y.values.mean(axis=0))
        centered = Y.values - Y.values.mean(axis=0)
        expected = 0.5 * (centered ** 2).sum()
        assert objective_gaussian(X, Y, coef, PenaltySpec(0.0)) == pytest.approx(expected, rel=1e-14)

    def test_perfect_fit_leaves_penalty_only(self):
        # Y built exactly as X @ B, so the objective is the penalty: 1 * ||(3,4)|| = 5
        X = DesignMatrix(np.array([[1.0], [-1.0], [2.0]]))
        beta = np.array([[3.0, 4.0]])
        Y = ResponseMatrix(X.values @ beta, GAUSSIAN)
        coef = CoefficientMatrix(beta, np.zeros(2))
        assert objective_gaussian(X, Y, coef, PenaltySpec(1.0, 1.0)) == pytest.approx(5.0, rel=1e-15)

    def test_one_by_one(self):
        X = DesignMatrix([[1.0]])
        Y = ResponseMatrix([[1.0]], GAUSSIAN)
        coef = CoefficientMatrix(np.array([[0.5]]), np.zeros(1))
        assert objective_gaussian(X, Y, coef, PenaltySpec(0.0)) == pytest.approx(0.125, rel=1e-15)

    def test_dimension_mismatch(self):
        X = DesignMatrix(np.ones((3, 2)))
        Y = ResponseMatrix(np.ones((4, 1)), GAUSSIAN)
        with pytest.raises(ValueError, match="rows"):
            objective_gaussian(X, Y, CoefficientMatrix.zeros(2, 1), PenaltySpec(1.0))

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(4)
        Xv = rng.standard_normal((15, 5))
        Yv = rng.standard_normal((15, 3))
        coef = CoefficientMatrix(rng.standard_normal((5, 3)), rng.standard_normal(3))
        spec = PenaltySpec(0.8, 0.6)
        perm = rng.permutation(15)
        a = objective_gaussian(DesignMatrix(Xv), ResponseMatrix(Yv, GAUSSIAN), coef, spec)
        b = objective_gaussian(DesignMatrix(Xv[perm]), ResponseMatrix(Yv[perm], GAUSSIAN), coef, spec)
        assert a == pytest.approx(b, rel=1e-12)

    def test_scaling_identity(self):
        # objective(X, cY, cB, c*lam, alpha=1) = c^2 * objective(X, Y, B, lam, 1)
        rng = np.random.default_rng(6)
        X = DesignMatrix(rng.standard_normal((12, 4)))
        Yv = rng.standard_normal((12, 2))
        beta = rng.standard_normal((4, 2))
        lam, c = 0.9, 3.7
        base = objective_gaussian(
            X, ResponseMatrix(Yv, GAUSSIAN),
            CoefficientMatrix(beta, np.zeros(2)), PenaltySpec(lam, 1.0))
        scaled = objective_gaussian(
            X, ResponseMatrix(c * Yv, GAUSSIAN),
            CoefficientMatrix(c * beta, np.zeros(2)), PenaltySpec(c * lam, 1.0))
        assert scaled == pytest.approx(c ** 2 * base, rel=1e-12)


class TestObjectiveMultinomial:
    def test_null_model_uniform(self):
        rng = np.random.default_rng(11)
        Y = ResponseMatrix.from_labels([1, 2, 3, 1, 2])
        X = DesignMatrix(rng.standard_normal((5, 2)))
        coef = CoefficientMatrix.zeros(2, 3)
        value = objective_multinomial(X, Y, coef, PenaltySpec(0.0))
        assert value == pytest.approx(5 * math.log(3), rel=1e-14)

    def test_saturated_probabilities_no_overflow(self):
        # eta puts essentially all mass on the true class; loss ~ 0, no overflow
        X = DesignMatrix([[1.0, 0.0], [0.0, 1.0]])
        Y = ResponseMatrix([[1.0, 0.0], [1.0, 0.0]], MULTINOMIAL)
        beta = np.array([[1000.0, 0.0], [1000.0, 0.0]])
        coef = CoefficientMatrix(beta, np.zeros(2))
        value = objective_multinomial(X, Y, coef, PenaltySpec(0.0))
        assert 0.0 <= value <= 1e-300

    def test_hand_computed_two_class(self):
        X = DesignMatrix([[1.0]])
        Y = ResponseMatrix([[1.0, 0.0]], MULTINOMIAL)
        coef = CoefficientMatrix(np.array([[math.log(2.0), 0.0]]), np.zeros(2))
        value = objective_multinomial(X, Y, coef, PenaltySpec(0.0))
        assert value == pytest.approx(-math.log(2.0 / 3.0), rel=1e-12)

    def test_row_shift_invariance_unpenalized(self):
        # adding a constant to one coefficient row leaves the loss unchanged at lam=0
        rng = np.random.default_rng(7)
        X = DesignMatrix(rng.standard_normal((20, 4)))
        Y = ResponseMatrix.from_labels(rng.integers(1, 4, 20), n_classes=3)
        beta = rng.standard_normal((4, 3))
        shifted = beta.copy()
        shifted[2] += 0.77
        spec = PenaltySpec(0.0)
        a = objective_multinomial(X, Y, CoefficientMatrix(beta, np.zeros(3)), spec)
        b = objective_multinomial(X, Y, CoefficientMatrix(shifted, np.zeros(3)), spec)
        assert a == pytest.approx(b, rel=1e-12)

    def test_requires_multinomial_family(self):
        X = DesignMatrix(np.ones((2, 1)))
        Y = ResponseMatrix(np.ones((2, 2)), GAUSSIAN)
        with pytest.raises(ValueError, match="multinomial"):
            objective_multinomial(X, Y, CoefficientMatrix.zeros(1, 2), PenaltySpec(1.0))
