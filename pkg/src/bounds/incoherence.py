"""
Incoherence of a normalized design, the K factor, and the sorted noise
correlations B_(i)^T(-eps) that drive the empirical bounds on ||w^I||_1.
"""

import logging
from typing import Optional

import numpy as np

from config.solver_config import SolverConfig, resolve_config
from src.models.data_models import (
    CorrelationOrder,
    LinearProgram,
    LPStatus,
    NormalizedDesign,
    Sense,
    TrainingSet,
)
from src.models.errors import BadQ, DegenerateIncoherence, DimensionMismatch, NumericalBreakdown
from src.solvers.linear_program import lp_solve

logger = logging.getLogger(__name__)

DEGENERATE_M = 1e-15


def incoherence(design: NormalizedDesign, config: Optional[SolverConfig] = None) -> float:
    """
    M = max over i != j of |X_i^T X_j|.

    Uses the full Gram matrix up to config.gram_full_threshold columns and a
    blocked pass above it, keeping memory at O(n * block + block^2).
    """
    cfg = resolve_config(config)
    X = design.columns
    p = X.shape[1]
    if p < 2:
        raise DimensionMismatch(f"incoherence needs at least 2 columns, got {p}")

    if p <= cfg.gram_full_threshold:
        gram = X.T @ X
        np.fill_diagonal(gram, 0.0)
        return float(np.max(np.abs(gram)))

    block = cfg.gram_block_size
    best = 0.0
    for start in range(0, p, block):
        left = X[:, start:start + block]
        for other in range(start, p, block):
            gram = left.T @ X[:, other:other + block]
            if other == start:
                np.fill_diagonal(gram, 0.0)
            best = max(best, float(np.max(np.abs(gram))))
    logger.debug(f"Blocked incoherence over p={p} with block {block}: M={best:.6g}")
    return best


def k_factor(M: float, s: int) -> float:
    """K = (1 + M) / (s M) - 4."""
    if M <= DEGENERATE_M:
        raise DegenerateIncoherence(f"M = {M:.3e}; K is unbounded")
    return (1.0 + M) / (s * M) - 4.0


def sorted_noise_correlations(ts: TrainingSet, q: int) -> CorrelationOrder:
    """
    The q off-support columns with the largest |A_i^T eps|, sign-corrected so
    that B_i^T(-eps) >= 0, in descending order (ties by column index).

    Raises:
        BadQ: if q < 1 or q > p - s
    """
    available = ts.p - ts.s
    if q < 1 or q > available:
        raise BadQ(f"q must lie in [1, {available}], got {q}")

    A = ts.X[:, ts.s:]
    projections = A.T @ (-ts.noise.values)
    magnitudes = np.abs(projections)

    if q < available:
        candidates = np.argpartition(-magnitudes, q - 1)[:q]
        # Include every column tied with the q-th value so the tie rule is deterministic.
        threshold = magnitudes[candidates].min()
        candidates = np.flatnonzero(magnitudes >= threshold)
    else:
        candidates = np.arange(available)
    order = candidates[np.lexsort((candidates, -magnitudes[candidates]))][:q]

    signs = np.where(projections[order] < 0, -1.0, 1.0)
    return CorrelationOrder(
        indices=order + ts.s,
        inner_products=magnitudes[order],
        vectors=A[:, order] * signs,
    )


def empirical_ub_wI1_lp(
    order: CorrelationOrder, eps: np.ndarray, config: Optional[SolverConfig] = None
) -> float:
    """
    max lambda^T(-eps) s.t. B_(i)^T lambda <= 1 for the retained columns.

    A relaxation of the dual of the w^I problem, so its value is at least
    ||w^I||_1. Returns +inf when the relaxation is unbounded.
    """
    cfg = resolve_config(config)
    q = order.q
    if q < 1:
        raise BadQ("the relaxation needs at least one column")
    n = order.vectors.shape[0]
    lp = LinearProgram(
        objective=np.concatenate((-np.asarray(eps, dtype=float), np.zeros(q))),
        equality_matrix=np.hstack((order.vectors.T, np.eye(q))),
        equality_rhs=np.ones(q),
        lower_bounds=np.concatenate((np.full(n, -np.inf), np.zeros(q))),
        upper_bounds=np.full(n + q, np.inf),
        sense=Sense.MAXIMIZE,
    )
    result = lp_solve(lp, cfg)
    if result.status is LPStatus.UNBOUNDED:
        logger.warning(f"Relaxed w^I dual with q={q} is unbounded")
        return float("inf")
    if not result.optimal:
        raise NumericalBreakdown(f"Relaxed w^I dual ended {result.status.value}")
    return float(result.objective_value)
