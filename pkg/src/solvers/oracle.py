"""Brute-force minimum-l1 oracle over basic solutions, for tiny instances."""

import itertools

import numpy as np

from src.models.errors import Intractable, NoFeasibleBasis

MAX_ROWS = 4
MAX_COLUMNS = 8
RESIDUAL_TOL = 1e-10


def brute_force_l1(X: np.ndarray, y: np.ndarray, fixed_zero_prefix: int = 0) -> float:
    """
    Minimum l1-norm over all basic solutions of X beta = y.

    An optimal l1 interpolant can always be taken basic, so enumerating every
    n-column subset of the allowed columns and solving the square system finds
    the optimum.

    Args:
        X: n x p matrix with n <= 4, p <= 8
        y: Right-hand side
        fixed_zero_prefix: Number of leading columns forced to zero

    Returns:
        Minimum l1-norm

    Raises:
        Intractable: beyond the size guard rails
        NoFeasibleBasis: no subset spans y
    """
    n, p = X.shape
    if n > MAX_ROWS or p > MAX_COLUMNS:
        raise Intractable(f"brute force limited to n <= {MAX_ROWS}, p <= {MAX_COLUMNS}; got {n} x {p}")
    if not np.any(y):
        return 0.0

    best = np.inf
    scale = 1.0 + float(np.linalg.norm(y))
    for subset in itertools.combinations(range(fixed_zero_prefix, p), n):
        columns = X[:, subset]
        if np.linalg.matrix_rank(columns) < n:
            continue
        coefficients = np.linalg.solve(columns, y)
        if np.linalg.norm(columns @ coefficients - y) <= RESIDUAL_TOL * scale:
            best = min(best, float(np.abs(coefficients).sum()))

    if not np.isfinite(best):
        raise NoFeasibleBasis(f"No {n}-column subset of columns {fixed_zero_prefix}..{p - 1} spans y")
    return best
