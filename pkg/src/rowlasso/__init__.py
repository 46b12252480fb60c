"""Row-grouped elastic-net solvers for multiresponse and multinomial regression.

Blockwise coordinate descent fits the Gaussian model; a majorized outer loop
reduces the multinomial model to the same Gaussian core.  The path engine adds
a geometric penalty grid, warm starts, strong-rule screening and KKT repair,
and an independent proximal-gradient oracle certifies solutions on small
problems.
"""

from .bench import BenchReport, BenchRow, run_bench
from .core import (
    FAMILIES,
    GAUSSIAN,
    MULTINOMIAL,
    CoefficientMatrix,
    DesignMatrix,
    KKTReport,
    PenaltySpec,
    ResponseMatrix,
    center_columns,
    center_design,
    linear_predictor,
    log_sum_exp_rows,
    objective_gaussian,
    objective_multinomial,
    penalty_value,
    row_group_norms,
)
from .gaussian import (
    GaussianFit,
    GaussianFitConfig,
    fit_gaussian,
    kkt_check_gaussian,
    row_update,
)
from .multinomial import (
    MultinomialFit,
    MultinomialFitConfig,
    ProbabilityMatrix,
    fit_multinomial,
    hessian_block,
    kkt_check_multinomial,
    majorization_t,
    probabilities,
    softmax_rows,
    working_response,
)
from .oracle import (
    OracleConfig,
    OracleFit,
    oracle_fit_gaussian,
    oracle_fit_multinomial,
    prox_group_row,
)
from .path import (
    PathConfig,
    PathFit,
    PathPoint,
    fit_path,
    lambda_grid,
    lambda_max,
    strong_rule_screen,
)
from .simulate import SimulationSpec, gen_synthetic

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BenchRow",
    "CoefficientMatrix",
    "DesignMatrix",
    "FAMILIES",
    "GAUSSIAN",
    "GaussianFit",
    "GaussianFitConfig",
    "KKTReport",
    "MULTINOMIAL",
    "MultinomialFit",
    "MultinomialFitConfig",
    "OracleConfig",
    "OracleFit",
    "PathConfig",
    "PathFit",
    "PathPoint",
    "PenaltySpec",
    "ProbabilityMatrix",
    "ResponseMatrix",
    "SimulationSpec",
    "center_columns",
    "center_design",
    "fit_gaussian",
    "fit_multinomial",
    "fit_path",
    "gen_synthetic",
    "hessian_block",
    "kkt_check_gaussian",
    "kkt_check_multinomial",
    "lambda_grid",
    "lambda_max",
    "linear_predictor",
    "log_sum_exp_rows",
    "majorization_t",
    "objective_gaussian",
    "objective_multinomial",
    "oracle_fit_gaussian",
    "oracle_fit_multinomial",
    "penalty_value",
    "probabilities",
    "prox_group_row",
    "row_group_norms",
    "row_update",
    "run_bench",
    "softmax_rows",
    "strong_rule_screen",
    "working_response",
]
