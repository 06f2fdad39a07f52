"""MM solvers for penalized logistic regression built on tangent bounds."""

from .bounds import (
    BoundKind,
    PqCoefficients,
    eval_bound,
    eval_transformed,
    h,
    h_prime,
    pg_weight,
    pq_coeffs,
)
from .boxqp import BoxQpError, BoxQpProblem, solve_box_qp
from .coord import (
    PiecewiseProblem1D,
    cd_update_pq,
    cd_update_quadratic,
    kkt_check,
    maximize_piecewise_1d,
    soft_threshold,
    solve_elastic_net,
)
from .data import RawTable, lambda_heuristic, load_csv, save_csv, standardize, synth
from .objective import (
    Dataset,
    PenaltyConfig,
    TangentState,
    gradient,
    log_likelihood,
    make_tangent_state,
    penalized_objective,
    surrogate_value,
)
from .ridge import (
    MMResult,
    SolverConfig,
    mm_step_pq,
    mm_step_quadratic,
    solve_ridge,
    woodbury_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BoundKind",
    "PqCoefficients",
    "h",
    "h_prime",
    "pg_weight",
    "pq_coeffs",
    "eval_bound",
    "eval_transformed",
    "Dataset",
    "PenaltyConfig",
    "TangentState",
    "log_likelihood",
    "penalized_objective",
    "make_tangent_state",
    "surrogate_value",
    "gradient",
    "SolverConfig",
    "MMResult",
    "solve_ridge",
    "mm_step_quadratic",
    "mm_step_pq",
    "woodbury_solve",
    "BoxQpProblem",
    "BoxQpError",
    "solve_box_qp",
    "PiecewiseProblem1D",
    "soft_threshold",
    "maximize_piecewise_1d",
    "cd_update_quadratic",
    "cd_update_pq",
    "solve_elastic_net",
    "kkt_check",
    "RawTable",
    "load_csv",
    "save_csv",
    "standardize",
    "lambda_heuristic",
    "synth",
    "__version__",
]
