"""
Interpolating estimators: Basis Pursuit, the noise-only interpolator w^I,
the minimum-l2-norm interpolator and the min-MSE regressor.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import lstsq, qr, solve_triangular

from config.solver_config import SolverConfig, resolve_config
from src.generation.model_gen import rescale_model
from src.models.data_models import (
    InterpolatorOutput,
    LinearProgram,
    Sense,
    SolveResult,
    TrainingSet,
)
from src.models.errors import FeasibilityError, NumericalBreakdown, RankDeficient, RegimeViolation
from src.solvers.linear_program import lp_solve
from src.solvers.sparsify import sparsify_solution

logger = logging.getLogger(__name__)


def l1_interpolation_lp(X: np.ndarray, target: np.ndarray) -> LinearProgram:
    """min sum(u + v) s.t. X (u - v) = target, u, v >= 0."""
    p = X.shape[1]
    return LinearProgram(
        objective=np.ones(2 * p),
        equality_matrix=np.hstack((X, -X)),
        equality_rhs=np.asarray(target, dtype=float),
        lower_bounds=np.zeros(2 * p),
        upper_bounds=np.full(2 * p, np.inf),
        sense=Sense.MINIMIZE,
    )


def solve_min_l1(
    X: np.ndarray, target: np.ndarray, config: Optional[SolverConfig] = None
) -> Tuple[np.ndarray, SolveResult]:
    """Minimum-l1 solution of X beta = target, sparsified to at most n non-zeros."""
    cfg = resolve_config(config)
    p = X.shape[1]
    result = lp_solve(l1_interpolation_lp(X, target), cfg)
    if not result.optimal:
        raise NumericalBreakdown(f"l1 interpolation LP ended {result.status.value}")
    beta = result.solution[:p] - result.solution[p:]
    return sparsify_solution(beta, X, target, cfg), result


def basis_pursuit(ts: TrainingSet, config: Optional[SolverConfig] = None) -> InterpolatorOutput:
    """
    Basis Pursuit: min ||beta||_1 subject to X beta = Y.

    Args:
        ts: Training set with p >= n
        config: Tolerances

    Returns:
        InterpolatorOutput for beta-hat, errors measured against beta_scaled
    """
    cfg = resolve_config(config)
    if ts.p < ts.n:
        raise RegimeViolation(f"Basis Pursuit needs p >= n, got p={ts.p}, n={ts.n}")
    row_space_factor(ts.X, cfg)
    beta, result = solve_min_l1(ts.X, ts.observations, cfg)
    logger.debug(f"BP n={ts.n} p={ts.p}: ||beta||_1={np.abs(beta).sum():.6g}")
    return regressor_output(beta, ts, cfg, solver=result)


def noise_interpolator(ts: TrainingSet, config: Optional[SolverConfig] = None) -> InterpolatorOutput:
    """
    w^I: min ||w||_1 subject to X w = eps with the first s coordinates fixed to 0.

    The reported multipliers are the lambda of the dual problem
    max lambda^T(-eps) s.t. |lambda^T A_i| <= 1.
    """
    cfg = resolve_config(config)
    if ts.p - ts.s < ts.n:
        raise RegimeViolation(f"w^I needs p - s >= n, got p - s = {ts.p - ts.s}, n = {ts.n}")
    A = ts.X[:, ts.s:]
    try:
        row_space_factor(A, cfg)
    except RankDeficient as exc:
        raise RankDeficient(f"Off-support columns do not span R^n: {exc}") from exc

    alpha, result = solve_min_l1(A, ts.noise.values, cfg)
    w = np.zeros(ts.p)
    w[ts.s:] = alpha
    return InterpolatorOutput(
        estimate=w,
        model_error_l2=float(np.linalg.norm(w)),
        model_error_l1=float(np.abs(w).sum()),
        model_error_l2_unscaled=float(np.linalg.norm(rescale_model(w, ts.design.column_norms, ts.n))),
        nonzero_count=support_size(w, cfg),
        solver=result,
        multipliers=-result.dual_multipliers,
    )


def min_l2_overfit(ts: TrainingSet, config: Optional[SolverConfig] = None) -> InterpolatorOutput:
    """Minimum-l2-norm interpolator X^T (X X^T)^{-1} Y via a QR factorization of X^T."""
    cfg = resolve_config(config)
    if ts.p < ts.n:
        raise RegimeViolation(f"min-l2 interpolation needs p >= n, got p={ts.p}, n={ts.n}")
    Q, R, perm = row_space_factor(ts.X, cfg)
    z = solve_triangular(R.T, ts.observations[perm], lower=True)
    return regressor_output(Q @ z, ts, cfg)


def min_mse(ts: TrainingSet, config: Optional[SolverConfig] = None) -> InterpolatorOutput:
    """Least-squares fit (minimum-norm when column-rank deficient) for p <= n."""
    cfg = resolve_config(config)
    if ts.p > ts.n:
        raise RegimeViolation(f"min-MSE regression is reported for p <= n, got p={ts.p}, n={ts.n}")
    beta, _, _, _ = lstsq(ts.X, ts.observations)
    return regressor_output(beta, ts, cfg)


def dual_value_wI(
    ts: TrainingSet, multipliers: np.ndarray, config: Optional[SolverConfig] = None
) -> float:
    """
    Dual objective lambda^T(-eps) of the w^I problem.

    Raises:
        FeasibilityError: if |lambda^T A_i| > 1 + tol for some off-support column
    """
    cfg = resolve_config(config)
    correlations = np.abs(ts.X[:, ts.s:].T @ multipliers)
    if correlations.size:
        worst = int(np.argmax(correlations))
        if correlations[worst] > 1.0 + cfg.feasibility_tol:
            raise FeasibilityError(ts.s + worst, float(correlations[worst]))
    return float(multipliers @ (-ts.noise.values))


def row_space_factor(
    X: np.ndarray, config: Optional[SolverConfig] = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Pivoted economic QR of X^T: X^T[:, perm] = Q R.

    Raises:
        RankDeficient: if X does not have full row rank
    """
    cfg = resolve_config(config)
    n, p = X.shape
    if p < n:
        raise RankDeficient(f"{n} x {p} matrix cannot have full row rank")
    Q, R, perm = qr(X.T, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(R))
    if diagonal.size and diagonal[-1] <= cfg.pivot_tol * max(diagonal[0], 1.0):
        raise RankDeficient(f"Numerical row rank below {n} (|R_nn| = {diagonal[-1]:.3e})")
    return Q, R, perm


def support_size(vector: np.ndarray, config: SolverConfig) -> int:
    """Entries with magnitude above zero_tol."""
    return int(np.count_nonzero(np.abs(vector) > config.zero_tol))


def regressor_output(
    beta: np.ndarray,
    ts: TrainingSet,
    config: SolverConfig,
    solver: Optional[SolveResult] = None,
) -> InterpolatorOutput:
    """Model errors of an estimate in scaled and unscaled coordinates."""
    w = beta - ts.truth.beta_scaled
    beta_unscaled = rescale_model(beta, ts.design.column_norms, ts.n)
    return InterpolatorOutput(
        estimate=beta,
        model_error_l2=float(np.linalg.norm(w)),
        model_error_l1=float(np.abs(w).sum()),
        model_error_l2_unscaled=float(np.linalg.norm(beta_unscaled - ts.truth.beta_unscaled)),
        nonzero_count=support_size(beta, config),
        solver=solver,
    )
