"""
Equality-form linear programs.

The simplex work is delegated to HiGHS' dual simplex through SciPy; this module
recomputes the certificate (multipliers, residual, duality gap) from the
returned vertex so callers never depend on solver-specific conventions.
"""

import logging
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from config.solver_config import SolverConfig, resolve_config
from src.models.data_models import LinearProgram, LPStatus, Sense, SolveResult
from src.models.errors import NumericalBreakdown

logger = logging.getLogger(__name__)

_HIGHS_STATUS = {
    0: LPStatus.OPTIMAL,
    2: LPStatus.INFEASIBLE,
    3: LPStatus.UNBOUNDED,
}


def lp_solve(lp: LinearProgram, config: Optional[SolverConfig] = None) -> SolveResult:
    """
    Solve an equality-form LP with the dual simplex method.

    Args:
        lp: Problem to solve
        config: Tolerances (defaults from environment)

    Returns:
        SolveResult; infeasible and unbounded problems are statuses, not errors

    Raises:
        NumericalBreakdown: on solver numerical trouble, iteration limit, or an
            ill-conditioned support sub-matrix at the returned vertex
    """
    cfg = resolve_config(config)
    sign = 1.0 if lp.sense is Sense.MINIMIZE else -1.0
    c = sign * lp.objective

    res = linprog(
        c,
        A_eq=lp.equality_matrix,
        b_eq=lp.equality_rhs,
        bounds=np.column_stack((lp.lower_bounds, lp.upper_bounds)),
        method="highs-ds",
        options={
            "primal_feasibility_tolerance": max(cfg.feasibility_tol * 1e-2, 1e-10),
            "dual_feasibility_tolerance": max(cfg.duality_gap_tol * 1e-2, 1e-10),
        },
    )

    status = _HIGHS_STATUS.get(res.status)
    if status is None:
        raise NumericalBreakdown(f"HiGHS stopped with status {res.status}: {res.message}")

    m, k = lp.num_variables, lp.num_constraints
    if status is not LPStatus.OPTIMAL:
        logger.debug(f"LP ({k}x{m}) terminated {status.value} after {res.nit} iterations")
        return SolveResult(
            status=status,
            solution=np.full(m, np.nan),
            objective_value=np.nan if status is LPStatus.INFEASIBLE else -sign * np.inf,
            dual_multipliers=np.full(k, np.nan),
            iterations=int(res.nit),
            primal_residual=np.nan,
            duality_gap=np.nan,
        )

    x = np.asarray(res.x, dtype=float)
    _check_support_conditioning(lp, x, cfg)

    # Multipliers of the minimization form: c - A^T y = reduced costs.
    y_min = np.asarray(res.eqlin.marginals, dtype=float) if k else np.zeros(0)
    lower_marg = np.asarray(res.lower.marginals, dtype=float)
    upper_marg = np.asarray(res.upper.marginals, dtype=float)
    dual_min = float(lp.equality_rhs @ y_min)
    finite_lower = np.isfinite(lp.lower_bounds)
    finite_upper = np.isfinite(lp.upper_bounds)
    dual_min += float(lp.lower_bounds[finite_lower] @ lower_marg[finite_lower])
    dual_min += float(lp.upper_bounds[finite_upper] @ upper_marg[finite_upper])
    primal_min = float(c @ x)

    residual = float(np.linalg.norm(lp.equality_matrix @ x - lp.equality_rhs)) if k else 0.0
    result = SolveResult(
        status=status,
        solution=x,
        objective_value=sign * primal_min,
        dual_multipliers=sign * y_min,
        iterations=int(res.nit),
        primal_residual=residual,
        duality_gap=abs(primal_min - dual_min),
    )
    logger.debug(
        f"LP ({k}x{m}) optimal in {result.iterations} iterations, "
        f"residual={residual:.2e}, gap={result.duality_gap:.2e}"
    )
    return result


def certificate_ok(result: SolveResult, lp: LinearProgram, config: Optional[SolverConfig] = None) -> bool:
    """Residual and duality gap within the configured relative tolerances."""
    cfg = resolve_config(config)
    if not result.optimal:
        return False
    rhs_scale = 1.0 + float(np.linalg.norm(lp.equality_rhs))
    gap_scale = 1.0 + abs(result.objective_value)
    return (
        result.primal_residual <= cfg.feasibility_tol * rhs_scale
        and result.duality_gap <= cfg.duality_gap_tol * gap_scale
    )


def _check_support_conditioning(lp: LinearProgram, x: np.ndarray, cfg: SolverConfig) -> None:
    off_bound = (x - lp.lower_bounds > cfg.pivot_tol) & (lp.upper_bounds - x > cfg.pivot_tol)
    columns = lp.equality_matrix[:, off_bound]
    if columns.size == 0 or columns.shape[1] > columns.shape[0]:
        return
    condition = float(np.linalg.cond(columns))
    if not condition <= cfg.condition_limit:
        raise NumericalBreakdown(
            f"Support sub-matrix condition estimate {condition:.3e} exceeds {cfg.condition_limit:.1e}"
        )
