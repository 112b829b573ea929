"""Reduced alpha-Hermitian-Einstein solver for invariant data on the Hopf surface."""

from .continuity import (
    ContinuityTrace,
    DestabilizerReport,
    NonConvergence,
    SolverConfig,
    SolverConfigError,
    StepRecord,
    L_epsilon,
    L_hat,
    curvature_term,
    destabilizer_extract,
    fd_residual,
    fractional_power,
    mean_curvature_defect,
    newton_continuation,
)
from .fields import InvariantField, SpectralGrid, expm_h, frob, logm_h
from .linear import LineSolveResult, apply_P, kernel_report, p_alpha_matrix, solve_line_he
from .reduce import (
    BackgroundCurvature,
    ReducedOperator,
    ReductionError,
    background_mean_curvature,
    lambda_contract,
    reduce_operators,
)

__all__ = [
    "BackgroundCurvature",
    "ContinuityTrace",
    "DestabilizerReport",
    "InvariantField",
    "L_epsilon",
    "L_hat",
    "LineSolveResult",
    "NonConvergence",
    "ReducedOperator",
    "ReductionError",
    "SolverConfig",
    "SolverConfigError",
    "SpectralGrid",
    "StepRecord",
    "apply_P",
    "background_mean_curvature",
    "curvature_term",
    "destabilizer_extract",
    "expm_h",
    "fd_residual",
    "fractional_power",
    "frob",
    "kernel_report",
    "lambda_contract",
    "logm_h",
    "mean_curvature_defect",
    "newton_continuation",
    "p_alpha_matrix",
    "reduce_operators",
    "solve_line_he",
]
