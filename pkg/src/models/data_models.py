"""
Data models for the double-descent toolkit.
Defines the instances, solver outputs, bound ledgers and sweep descriptions
passed between the generation, solver, bound and pipeline layers.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.models.errors import DimensionMismatch


class NoiseMode(str, Enum):
    """How the training noise is produced."""
    GAUSSIAN_SIGMA = "gaussian-sigma"
    EXACT_NORM = "exact-norm"


class LPStatus(str, Enum):
    """Terminal status of a linear program."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class Sense(str, Enum):
    """Optimization direction."""
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


class BoundKind(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    EXPECTATION = "expectation"
    DIAGNOSTIC = "diagnostic"


class BoundTarget(str, Enum):
    """Exact quantity a bound refers to."""
    WI_L1 = "wI_l1"
    WBP_L1 = "wBP_l1"
    WBP_L2 = "wBP_l2"
    M = "M"
    WL2_L2SQ = "wL2_l2sq"


class BoundSource(str, Enum):
    CLOSED_FORM = "closed-form"
    EMPIRICAL_LP = "empirical-LP"
    EMPIRICAL_VECTOR = "empirical-vector"


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawDesign:
    """Unnormalized Gaussian design H (n x p)."""
    entries: np.ndarray

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    @property
    def p(self) -> int:
        return int(self.entries.shape[1])


@dataclass(frozen=True)
class NormalizedDesign:
    """Design with unit-norm columns and the norms they were divided by."""
    columns: np.ndarray
    column_norms: np.ndarray

    @property
    def n(self) -> int:
        return int(self.columns.shape[0])

    @property
    def p(self) -> int:
        return int(self.columns.shape[1])

    def prefix(self, p: int) -> "NormalizedDesign":
        """First p columns (nested designs)."""
        return NormalizedDesign(columns=self.columns[:, :p], column_norms=self.column_norms[:p])


@dataclass(frozen=True)
class GroundTruth:
    """True regressor, before and after the column-norm distortion."""
    s: int
    beta_unscaled: np.ndarray
    beta_scaled: np.ndarray
    beta_norm: float

    @classmethod
    def zeros(cls, p: int, s: int) -> "GroundTruth":
        """Null signal on an s-sparse support."""
        return cls(s=s, beta_unscaled=np.zeros(p), beta_scaled=np.zeros(p), beta_norm=0.0)


@dataclass(frozen=True)
class NoiseVector:
    """Training noise epsilon (already divided by sqrt(n))."""
    values: np.ndarray
    mode: NoiseMode
    level: float

    @classmethod
    def zeros(cls, n: int) -> "NoiseVector":
        return cls(values=np.zeros(n), mode=NoiseMode.EXACT_NORM, level=0.0)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class TrainingSet:
    """A complete generated instance: Y = X beta + eps."""
    design: NormalizedDesign
    truth: GroundTruth
    noise: NoiseVector
    observations: np.ndarray

    @property
    def n(self) -> int:
        return self.design.n

    @property
    def p(self) -> int:
        return self.design.p

    @property
    def s(self) -> int:
        return self.truth.s

    @property
    def X(self) -> np.ndarray:
        return self.design.columns

    @property
    def noise_norm(self) -> float:
        return self.noise.norm


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearProgram:
    """Equality-form LP: optimize c^T x s.t. A x = b, lower <= x <= upper."""
    objective: np.ndarray
    equality_matrix: np.ndarray
    equality_rhs: np.ndarray
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    sense: Sense = Sense.MINIMIZE

    def __post_init__(self) -> None:
        m = self.objective.shape[0]
        k = self.equality_rhs.shape[0]
        if self.equality_matrix.shape != (k, m):
            raise DimensionMismatch(
                f"equality_matrix has shape {self.equality_matrix.shape}, expected {(k, m)}"
            )
        if self.lower_bounds.shape != (m,) or self.upper_bounds.shape != (m,):
            raise DimensionMismatch("bound vectors must have one entry per variable")
        if not np.all(np.isfinite(self.equality_rhs)):
            raise DimensionMismatch("equality_rhs must be finite")
        if np.any(self.lower_bounds > self.upper_bounds):
            raise DimensionMismatch("lower_bounds must not exceed upper_bounds")

    @property
    def num_variables(self) -> int:
        return int(self.objective.shape[0])

    @property
    def num_constraints(self) -> int:
        return int(self.equality_rhs.shape[0])


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one LP solve.

    dual_multipliers y satisfy objective_value = y^T b at optimality.
    """
    status: LPStatus
    solution: np.ndarray
    objective_value: float
    dual_multipliers: np.ndarray
    iterations: int
    primal_residual: float
    duality_gap: float

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


@dataclass(frozen=True)
class InterpolatorOutput:
    """An estimator's output together with its model errors.

    For w^I the estimate is w itself; for regressors it is beta-hat and the
    errors refer to beta-hat - beta.
    """
    estimate: np.ndarray
    model_error_l2: float
    model_error_l1: float
    model_error_l2_unscaled: float
    nonzero_count: int
    solver: Optional[SolveResult] = None
    multipliers: Optional[np.ndarray] = None


@dataclass
class InterpolatorOutputs:
    """Exact quantities available to the bound ledger."""
    bp: Optional[InterpolatorOutput] = None
    wI: Optional[InterpolatorOutput] = None
    min_l2: Optional[InterpolatorOutput] = None
    min_mse: Optional[InterpolatorOutput] = None
    incoherence: Optional[float] = None


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationOrder:
    """Off-support columns sign-corrected towards -eps and sorted.

    indices are columns of the full design; vectors[:, i] is B_(i).
    """
    indices: np.ndarray
    inner_products: np.ndarray
    vectors: np.ndarray

    @property
    def q(self) -> int:
        return int(self.indices.shape[0])


@dataclass(frozen=True)
class LedgerEntry:
    """One evaluated (or not evaluable) bound."""
    bound_id: str
    value: float
    kind: BoundKind
    target: BoundTarget
    source: BoundSource
    regime_ok: bool
    evaluable: bool = True
    reason: str = ""

    @property
    def unbounded(self) -> bool:
        return self.evaluable and math.isinf(self.value)

    @classmethod
    def not_evaluable(
        cls, bound_id: str, kind: BoundKind, target: BoundTarget, source: BoundSource, reason: str
    ) -> "LedgerEntry":
        return cls(
            bound_id=bound_id,
            value=math.nan,
            kind=kind,
            target=target,
            source=source,
            regime_ok=False,
            evaluable=False,
            reason=reason,
        )


@dataclass
class BoundLedger:
    """All bound entries for one instance plus the exact values they bound."""
    entries: Dict[str, LedgerEntry] = field(default_factory=dict)
    exact: Dict[str, float] = field(default_factory=dict)

    def value(self, bound_id: str) -> float:
        entry = self.entries.get(bound_id)
        return entry.value if entry is not None and entry.evaluable else math.nan

    def violated(self, bound_id: str, rel_tol: float = 1e-9) -> Optional[bool]:
        """Whether the exact target falls on the wrong side of the bound.

        None when either side is unavailable or the entry is not a one-sided bound.
        """
        entry = self.entries.get(bound_id)
        if entry is None or not entry.evaluable:
            return None
        if entry.kind not in (BoundKind.UPPER, BoundKind.LOWER):
            return None
        exact = self.exact.get(entry.target.value)
        if exact is None or not math.isfinite(exact):
            return None
        slack = rel_tol * max(1.0, abs(exact))
        if entry.kind is BoundKind.UPPER:
            return exact > entry.value + slack
        return exact < entry.value - slack


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

ESTIMATORS = ("bp", "min_l2", "min_mse", "wI", "M")


@dataclass(frozen=True)
class CurveSpec:
    """One curve of a figure: a fixed (s, ||beta||, noise level) setting."""
    label: str
    s: int
    beta_norm: float
    noise_level: float


@dataclass(frozen=True)
class SweepSpec:
    """Declarative experiment description."""
    n_values: Tuple[int, ...]
    p_values: Tuple[int, ...]
    curves: Tuple[CurveSpec, ...]
    trials: int
    base_seed: int
    estimators: Tuple[str, ...]
    bounds: Tuple[str, ...] = ()
    noise_mode: NoiseMode = NoiseMode.EXACT_NORM
    nested_p: bool = True
    figure_preset: Optional[str] = None
    report_n_scaled: bool = False
    notes: Tuple[str, ...] = ()
    plot_quantities: Tuple[str, ...] = ()
    plot_axis: str = "p"
    plot_log_y: bool = True

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.n_values or not self.p_values or not self.curves:
            raise ValueError("n_values, p_values and curves must be non-empty")
        if list(self.p_values) != sorted(self.p_values):
            raise ValueError("p_values must be sorted ascending")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"Unknown estimators: {sorted(unknown)}")
        if self.plot_axis not in ("p", "n"):
            raise ValueError("plot_axis must be 'p' or 'n'")


@dataclass(frozen=True)
class CellIndex:
    """Position of a cell inside a sweep."""
    curve: int
    n: int
    p: int


@dataclass(frozen=True)
class QuantityStats:
    median: float
    mean: float
    q10: float
    q90: float


@dataclass
class CellStats:
    """Aggregated trial statistics for one (curve, n, p) cell."""
    curve: str
    n: int
    p: int
    s: int
    beta_norm: float
    noise_level: float
    trial_count: int
    failed_trials: int = 0
    quantities: Dict[str, QuantityStats] = field(default_factory=dict)
    violation_counts: Dict[str, int] = field(default_factory=dict)


@dataclass
class RunConfig:
    """Parsed command line."""
    command: str
    output_dir: str = "results"
    formats: List[str] = field(default_factory=lambda: ["csv", "svg"])
    seed: int = 0
    preset: Optional[str] = None
    spec: Optional[SweepSpec] = None
    tolerance_scale: float = 1.0
    verbose: bool = False


# ---------------------------------------------------------------------------
# Selftest
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """One failed invariant, with the seed that reproduces it."""
    check: str
    seed: int
    description: str


@dataclass
class SelftestReport:
    """Outcome of the deterministic invariant suite."""
    runs: Dict[str, int] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def render(self) -> str:
        """Plain-text report; identical for identical runs."""
        lines = []
        for check, count in self.runs.items():
            failed = sum(1 for v in self.violations if v.check == check)
            status = "ok" if failed == 0 else "FAILED"
            lines.append(f"{check}: {count} instance(s), {failed} violation(s) [{status}]")
        for violation in self.violations:
            lines.append(f"  {violation.check} seed={violation.seed}: {violation.description}")
        lines.append("selftest " + ("passed" if self.passed else "failed"))
        return "\n".join(lines)
