"""
Monte-Carlo sweep engine.

A sweep is a grid of cells (curve, n, p). Every trial of every cell draws its
instance from its own SeedSequence, so results depend only on the SweepSpec
and never on the order or parallelism in which cells run.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from config.solver_config import SolverConfig, resolve_config
from src.bounds.catalog import bound_spec
from src.bounds.incoherence import incoherence, k_factor
from src.bounds.ledger import bound_ledger
from src.generation.model_gen import generate_training_set
from src.generation.rng import NESTED_P, trial_stream
from src.models.data_models import (
    BoundTarget,
    CellIndex,
    CellStats,
    InterpolatorOutputs,
    QuantityStats,
    SweepSpec,
    TrainingSet,
)
from src.models.errors import DegenerateIncoherence, DimensionMismatch, DoubleDescentError, RegimeViolation
from src.solvers.interpolators import basis_pursuit, min_l2_overfit, min_mse, noise_interpolator

logger = logging.getLogger(__name__)

CUSTOM_FIGURE = "custom"
STATS = ("median", "mean", "q10", "q90")
CELL_COLUMNS = ("curve", "n", "p", "s", "beta_norm", "noise_level", "trials", "failed_trials")

# Bound symbols that are produced by an estimator.
_SYMBOL_ESTIMATOR = {
    "wI_l1": "wI",
    "wBP_l1": "bp",
    "wBP_l2": "bp",
    "wBP_l2_unscaled": "bp",
    "M": "M",
    "K": "M",
}


@dataclass(frozen=True)
class TrialResult:
    """Quantities and bound violations of one trial."""
    quantities: Dict[str, float]
    violations: Dict[str, bool]


def effective_estimators(spec: SweepSpec) -> Tuple[str, ...]:
    """Requested estimators plus whatever the requested bounds consume."""
    wanted = set(spec.estimators)
    for bound_id in spec.bounds:
        for symbol in bound_spec(bound_id).params:
            if symbol in _SYMBOL_ESTIMATOR:
                wanted.add(_SYMBOL_ESTIMATOR[symbol])
        if bound_spec(bound_id).target is BoundTarget.WL2_L2SQ:
            wanted.add("min_l2")
    return tuple(name for name in ("bp", "min_l2", "min_mse", "wI", "M") if name in wanted)


def quantity_names(spec: SweepSpec) -> Tuple[str, ...]:
    """Per-trial quantity names, in CSV column order."""
    estimators = effective_estimators(spec)
    names: List[str] = ["noise_l2"]
    if "bp" in estimators:
        names += ["bp_l2", "bp_l1", "bp_l2_unscaled", "bp_nnz"]
        if spec.report_n_scaled:
            names.append("bp_l2_n4")
    if "min_l2" in estimators:
        names += ["min_l2_l2", "min_l2_l2sq_unscaled"]
    if "min_mse" in estimators:
        names.append("min_mse_l2")
    if "wI" in estimators:
        names.append("wI_l1")
    if "M" in estimators:
        names += ["M", "K"]
    names += list(spec.bounds)
    return tuple(names)


def trial_key(spec: SweepSpec, n_index: int, p_index: int, trial: int) -> str:
    """Human-readable replay key for a trial stream."""
    figure = spec.figure_preset or CUSTOM_FIGURE
    slot = "nested" if p_index == NESTED_P else str(p_index)
    return f"seed={spec.base_seed} figure={figure} n_index={n_index} p_index={slot} trial={trial}"


def run_trial(
    spec: SweepSpec, ts: TrainingSet, config: Optional[SolverConfig] = None
) -> TrialResult:
    """
    Run the requested estimators and bounds on one instance.

    Estimators outside their regime (BP below p = n, w^I below p - s = n,
    min-MSE above p = n, w^I without noise) leave NaN quantities; below
    p = n the BP and min-l2 quantities are filled with the min-MSE error.
    """
    cfg = resolve_config(config)
    estimators = effective_estimators(spec)
    values: Dict[str, float] = {name: math.nan for name in quantity_names(spec)}
    values["noise_l2"] = ts.noise_norm
    exact = InterpolatorOutputs()

    if ts.p < ts.n and ({"bp", "min_l2", "min_mse"} & set(estimators)):
        exact.min_mse = min_mse(ts, cfg)
    elif "min_mse" in estimators and ts.p == ts.n:
        exact.min_mse = min_mse(ts, cfg)

    if "bp" in estimators:
        exact.bp = basis_pursuit(ts, cfg) if ts.p >= ts.n else exact.min_mse
    if "min_l2" in estimators:
        exact.min_l2 = min_l2_overfit(ts, cfg) if ts.p >= ts.n else exact.min_mse
    if "wI" in estimators and ts.noise_norm > 0:
        try:
            exact.wI = noise_interpolator(ts, cfg)
        except RegimeViolation as exc:
            logger.debug(f"w^I skipped: {exc}")
    if "M" in estimators and ts.p >= 2:
        exact.incoherence = incoherence(ts.design, cfg)

    if exact.bp is not None:
        values.update(
            bp_l2=exact.bp.model_error_l2,
            bp_l1=exact.bp.model_error_l1,
            bp_l2_unscaled=exact.bp.model_error_l2_unscaled,
            bp_nnz=float(exact.bp.nonzero_count),
        )
        if spec.report_n_scaled:
            values["bp_l2_n4"] = exact.bp.model_error_l2 * ts.n ** -0.25
    if exact.min_l2 is not None:
        values["min_l2_l2"] = exact.min_l2.model_error_l2
        values["min_l2_l2sq_unscaled"] = exact.min_l2.model_error_l2_unscaled**2
    if exact.min_mse is not None and "min_mse" in estimators:
        values["min_mse_l2"] = exact.min_mse.model_error_l2
    if exact.wI is not None:
        values["wI_l1"] = exact.wI.model_error_l1
    if exact.incoherence is not None:
        values["M"] = exact.incoherence
        try:
            values["K"] = k_factor(exact.incoherence, ts.s)
        except DegenerateIncoherence:
            values["K"] = math.inf

    violations: Dict[str, bool] = {}
    if spec.bounds:
        ledger = bound_ledger(ts, exact, cfg, spec.bounds)
        for bound_id in spec.bounds:
            values[bound_id] = ledger.value(bound_id)
            violations[bound_id] = bool(ledger.violated(bound_id))
    return TrialResult(quantities=values, violations=violations)


def run_cell(spec: SweepSpec, cell: CellIndex, config: Optional[SolverConfig] = None) -> CellStats:
    """
    Run every trial of one (curve, n, p) cell and aggregate.

    Trials that raise are logged with their replay key, counted in
    failed_trials and excluded from the statistics.
    """
    cfg = resolve_config(config)
    curve = spec.curves[cell.curve]
    n_index = spec.n_values.index(cell.n)
    p_index = NESTED_P if spec.nested_p else spec.p_values.index(cell.p)
    figure = spec.figure_preset or CUSTOM_FIGURE

    rows: List[Dict[str, float]] = []
    violation_counts = {bound_id: 0 for bound_id in spec.bounds}
    failed = 0
    for trial in range(spec.trials):
        stream = trial_stream(spec.base_seed, figure, n_index, p_index, trial)
        try:
            ts = generate_training_set(
                cell.n, cell.p, curve.s, curve.beta_norm, curve.noise_level, stream, spec.noise_mode
            )
            result = run_trial(spec, ts, cfg)
        except DoubleDescentError as exc:
            failed += 1
            logger.warning(
                f"Trial excluded ({curve.label}, n={cell.n}, p={cell.p}; "
                f"{trial_key(spec, n_index, p_index, trial)}): {exc}"
            )
            continue
        rows.append(result.quantities)
        for bound_id, violated in result.violations.items():
            violation_counts[bound_id] += int(violated)

    frame = pd.DataFrame(rows, columns=list(quantity_names(spec)), dtype=float)
    return CellStats(
        curve=curve.label,
        n=cell.n,
        p=cell.p,
        s=curve.s,
        beta_norm=curve.beta_norm,
        noise_level=curve.noise_level,
        trial_count=spec.trials,
        failed_trials=failed,
        quantities={name: summarize(frame[name]) for name in frame.columns},
        violation_counts=violation_counts,
    )


def summarize(values: pd.Series) -> QuantityStats:
    """Median, mean and 10/90% quantiles over the finite values."""
    finite = values[np.isfinite(values.to_numpy(dtype=float))]
    if finite.empty:
        return QuantityStats(math.nan, math.nan, math.nan, math.nan)
    return QuantityStats(
        median=float(finite.median()),
        mean=float(finite.mean()),
        q10=float(finite.quantile(0.1)),
        q90=float(finite.quantile(0.9)),
    )


def cells(spec: SweepSpec) -> List[CellIndex]:
    """All cells in (curve, n, p) order."""
    return [
        CellIndex(curve=c, n=n, p=p)
        for c in range(len(spec.curves))
        for n in spec.n_values
        for p in spec.p_values
    ]


def sweep(spec: SweepSpec, config: Optional[SolverConfig] = None) -> List[CellStats]:
    """
    Run every cell of a sweep.

    Cells are distributed over config.n_jobs joblib workers; the returned list
    is in (curve, n, p) order regardless of the worker count.
    """
    cfg = resolve_config(config)
    grid = cells(spec)
    logger.info(
        f"Sweep {spec.figure_preset or CUSTOM_FIGURE}: {len(grid)} cells x {spec.trials} trials "
        f"on {cfg.n_jobs} worker(s)"
    )
    if cfg.n_jobs == 1:
        table = [run_cell(spec, cell, cfg) for cell in grid]
    else:
        table = Parallel(n_jobs=cfg.n_jobs)(delayed(run_cell)(spec, cell, cfg) for cell in grid)
    failed = sum(stats.failed_trials for stats in table)
    if failed:
        logger.warning(f"{failed} trial(s) excluded across the sweep")
    return list(table)


def table_to_frame(table: Sequence[CellStats]) -> pd.DataFrame:
    """One row per cell with `<quantity>_<stat>` and `<bound>_violations` columns."""
    if not table:
        raise DimensionMismatch("empty sweep table")
    records = []
    for stats in table:
        record: Dict[str, Union[str, int, float]] = {
            "curve": stats.curve,
            "n": stats.n,
            "p": stats.p,
            "s": stats.s,
            "beta_norm": stats.beta_norm,
            "noise_level": stats.noise_level,
            "trials": stats.trial_count,
            "failed_trials": stats.failed_trials,
        }
        for name, quantity in stats.quantities.items():
            for stat in STATS:
                record[f"{name}_{stat}"] = getattr(quantity, stat)
        for bound_id, count in stats.violation_counts.items():
            record[f"{bound_id}_violations"] = count
        records.append(record)
    return pd.DataFrame.from_records(records)


def series_keys(frame: pd.DataFrame, axis: str = "p") -> List[Tuple[str, pd.DataFrame]]:
    """
    Split a table into curves along axis.

    Along p a series is one (curve, n) pair; along n it is one (curve, p)
    pair. The n or p suffix is only added to the label when it varies.
    """
    other = "n" if axis == "p" else "p"
    multiple = frame[other].nunique() > 1
    series: List[Tuple[str, pd.DataFrame]] = []
    for label in pd.unique(frame["curve"]):
        by_curve = frame[frame["curve"] == label]
        for value in pd.unique(by_curve[other]):
            rows = by_curve[by_curve[other] == value].sort_values(axis)
            name = f"{label} {other}={value}" if multiple else str(label)
            series.append((name, rows))
    return series


def extract_minima(
    table: Union[Sequence[CellStats], pd.DataFrame], quantity: str, axis: str = "p"
) -> Dict[str, Tuple[int, float]]:
    """
    Location and value of the minimum of each median curve.

    Returns:
        {series label: (axis value at the minimum, minimum median value)}
    """
    frame = table if isinstance(table, pd.DataFrame) else table_to_frame(table)
    column = f"{quantity}_median"
    if column not in frame.columns:
        raise DimensionMismatch(f"no column '{column}' in the sweep table")
    minima: Dict[str, Tuple[int, float]] = {}
    for name, rows in series_keys(frame, axis):
        if len(rows) < 2:
            raise DimensionMismatch(f"curve '{name}' has fewer than 2 points along {axis}")
        finite = rows[np.isfinite(rows[column].to_numpy(dtype=float))]
        if finite.empty:
            continue
        best = finite.loc[finite[column].idxmin()]
        minima[name] = (int(best[axis]), float(best[column]))
    return minima


def failed_cells(table: Sequence[CellStats]) -> Set[Tuple[str, int, int]]:
    """Cells in which every trial was excluded."""
    return {
        (stats.curve, stats.n, stats.p)
        for stats in table
        if stats.failed_trials == stats.trial_count
    }
