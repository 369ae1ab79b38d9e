"""Evaluate every requested bound for one instance next to the exact values."""

import logging
from typing import Dict, Iterable, Optional, Set

from config.solver_config import SolverConfig, resolve_config
from src.bounds.catalog import BOUND_IDS, bound_spec, eval_bound
from src.bounds.incoherence import (
    empirical_ub_wI1_lp,
    incoherence,
    k_factor,
    sorted_noise_correlations,
)
from src.models.data_models import BoundLedger, InterpolatorOutputs, LedgerEntry, TrainingSet
from src.models.errors import DegenerateIncoherence, DoubleDescentError

logger = logging.getLogger(__name__)

_NEEDS_M = {"M", "K"}
_NEEDS_ORDER = {"b1", "b5n", "lp_value"}


def bound_ledger(
    ts: TrainingSet,
    exact: InterpolatorOutputs,
    config: Optional[SolverConfig] = None,
    bound_ids: Optional[Iterable[str]] = None,
) -> BoundLedger:
    """
    Build the ledger for one instance.

    Entries that cannot be evaluated (missing exact quantity, zero noise,
    formula outside its domain) are recorded as not evaluable with a reason.

    Args:
        ts: Training set
        exact: Exact interpolator outputs; M is computed when absent and needed
        config: Tolerances and q multiplier
        bound_ids: Identifiers to evaluate (default: all)
    """
    cfg = resolve_config(config)
    ids = tuple(bound_ids) if bound_ids is not None else BOUND_IDS
    needed = {name for bound_id in ids for name in bound_spec(bound_id).params}

    params: Dict[str, Optional[float]] = {
        "n": float(ts.n),
        "p": float(ts.p),
        "s": float(ts.s),
        "beta_norm": ts.truth.beta_norm,
        "sigma": ts.noise.level,
        "noise_norm": ts.noise_norm if ts.noise_norm > 0 else None,
    }
    ledger_exact: Dict[str, float] = {}

    if exact.wI is not None:
        params["wI_l1"] = ledger_exact["wI_l1"] = exact.wI.model_error_l1
    if exact.bp is not None:
        params["wBP_l1"] = ledger_exact["wBP_l1"] = exact.bp.model_error_l1
        params["wBP_l2"] = ledger_exact["wBP_l2"] = exact.bp.model_error_l2
        params["wBP_l2_unscaled"] = exact.bp.model_error_l2_unscaled
    if exact.min_l2 is not None:
        ledger_exact["wL2_l2sq"] = exact.min_l2.model_error_l2_unscaled**2

    M = exact.incoherence
    if M is None and needed & _NEEDS_M and ts.p >= 2:
        M = incoherence(ts.design, cfg)
    if M is not None:
        params["M"] = ledger_exact["M"] = M
        try:
            params["K"] = k_factor(M, ts.s)
        except DegenerateIncoherence as exc:
            logger.debug(f"K unavailable: {exc}")

    if needed & _NEEDS_ORDER and params["noise_norm"] is not None and ts.p > ts.s:
        params.update(_correlation_params(ts, needed, cfg))

    entries: Dict[str, LedgerEntry] = {}
    for bound_id in ids:
        spec = bound_spec(bound_id)
        try:
            entries[bound_id] = eval_bound(bound_id, params)
        except DoubleDescentError as exc:
            entries[bound_id] = LedgerEntry.not_evaluable(
                bound_id, spec.kind, spec.target, spec.source, str(exc)
            )
    return BoundLedger(entries=entries, exact=ledger_exact)


def _correlation_params(ts: TrainingSet, needed: Set[str], cfg: SolverConfig) -> Dict[str, float]:
    q_target = cfg.q_multiplier * ts.n
    q = min(q_target, ts.p - ts.s)
    order = sorted_noise_correlations(ts, q)
    values: Dict[str, float] = {"b1": float(order.inner_products[0])}
    if q == q_target:
        values["b5n"] = float(order.inner_products[q - 1])
    if "lp_value" in needed:
        try:
            values["lp_value"] = empirical_ub_wI1_lp(order, ts.noise.values, cfg)
        except DoubleDescentError as exc:
            logger.warning(f"Relaxed w^I dual failed (n={ts.n}, p={ts.p}): {exc}")
    return values
