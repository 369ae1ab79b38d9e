"""
Reduce an interpolating solution to at most n non-zeros without raising its l1-norm.

Each round takes n+1 columns of the current support, finds a null-space
combination c of them, and slides the solution along c to the end of the
sign-preserving interval [LB, UB] that does not increase the l1-norm. At least
one coordinate reaches zero per round.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from config.solver_config import SolverConfig, resolve_config
from src.models.data_models import TrainingSet
from src.models.errors import FeasibilityLost

logger = logging.getLogger(__name__)


def sparsify(
    estimate: np.ndarray, ts: TrainingSet, config: Optional[SolverConfig] = None
) -> np.ndarray:
    """Sparsify a solution of X beta = Y for the given training set."""
    return sparsify_solution(estimate, ts.X, ts.observations, config)


def sparsify_solution(
    estimate: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    config: Optional[SolverConfig] = None,
) -> np.ndarray:
    """
    Sparsify a solution of X beta = y.

    Args:
        estimate: Feasible point
        X: n x p matrix
        y: Right-hand side
        config: Tolerances

    Returns:
        Feasible point with at most n non-zeros and no larger l1-norm

    Raises:
        FeasibilityLost: if the residual exceeds the sparsify tolerance
    """
    cfg = resolve_config(config)
    n = X.shape[0]
    beta = np.array(estimate, dtype=float, copy=True)
    beta[np.abs(beta) <= cfg.zero_tol] = 0.0
    _check_residual(X, beta, y, cfg, 0)

    rounds = 0
    while np.count_nonzero(beta) > n:
        support = np.flatnonzero(beta)[: n + 1]
        direction = null_space(X[:, support])[:, 0]
        step, hit = _endpoint(beta[support], direction, support, cfg)
        beta[support] += step * direction
        beta[hit] = 0.0
        beta[np.abs(beta) <= cfg.zero_tol] = 0.0
        rounds += 1
        _check_residual(X, beta, y, cfg, rounds)

    if rounds:
        logger.debug(f"Sparsified to {np.count_nonzero(beta)} non-zeros in {rounds} rounds")
    return beta


def _endpoint(
    values: np.ndarray, direction: np.ndarray, support: np.ndarray, cfg: SolverConfig
) -> Tuple[float, int]:
    """Step length and the coordinate it zeroes."""
    usable = np.abs(direction) > cfg.pivot_tol * np.max(np.abs(direction))
    ratios = -values[usable] / direction[usable]
    indices = support[usable]

    lower = ratios < 0
    upper = ratios > 0
    lb, lb_index = (0.0, -1)
    ub, ub_index = (0.0, -1)
    if np.any(lower):
        k = int(np.argmax(np.where(lower, ratios, -np.inf)))
        lb, lb_index = float(ratios[k]), int(indices[k])
    if np.any(upper):
        k = int(np.argmin(np.where(upper, ratios, np.inf)))
        ub, ub_index = float(ratios[k]), int(indices[k])

    if lb < 0 < ub:
        slope = float(np.sum(direction * np.sign(values)))
        if slope > 0:
            return lb, lb_index
        if slope < 0:
            return ub, ub_index
        return (lb, lb_index) if lb_index < ub_index else (ub, ub_index)
    if lb < 0:
        return lb, lb_index
    return ub, ub_index


def _check_residual(X: np.ndarray, beta: np.ndarray, y: np.ndarray, cfg: SolverConfig, rnd: int) -> None:
    residual = float(np.max(np.abs(X @ beta - y))) if y.size else 0.0
    if residual > cfg.sparsify_residual_tol:
        raise FeasibilityLost(residual, rnd)
