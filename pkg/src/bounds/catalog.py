"""
Catalog of theoretical and empirical bounds.

Each bound is a BoundSpec: the symbols it reads, a closed-form formula and a
regime predicate. Values are absolute, so bounds stated relative to
||eps||_2 are multiplied by noise_norm; pass noise_norm = 1 for the ratio.
Regime predicates work in log space because the stated regimes involve
quantities like exp(n / 1792 s^2) that overflow long before they matter.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Tuple

from src.models.data_models import BoundKind, BoundSource, BoundTarget, LedgerEntry
from src.models.errors import DomainError, MissingParam, UnknownBound

Params = Mapping[str, float]

# Constant of the tail estimate behind the detailed w^I bound (about 0.063).
C_CONSTANT = (1.0 - 1.0 / math.sqrt(math.e)) * math.sqrt(2.0 / math.pi) / 5.0

UB_WBP1_CONSTANT = 4.0 * math.sqrt(2.0) + math.sqrt(1.0 / (2.0 * math.sqrt(7.0)))


@dataclass(frozen=True)
class BoundSpec:
    """Definition of one bound identifier."""
    bound_id: str
    kind: BoundKind
    target: BoundTarget
    source: BoundSource
    params: Tuple[str, ...]
    formula: Callable[[Params], float]
    regime: Callable[[Params], bool]
    description: str


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _log_p(v: Params) -> float:
    if v["p"] <= 1:
        raise DomainError(f"ln p must be positive, got p={v['p']}")
    return math.log(v["p"])


def _positive_k(v: Params) -> float:
    if not v["K"] > 0:
        raise DomainError(f"K must be positive, got {v['K']:.6g}")
    return v["K"]


def _positive(v: Params, name: str) -> float:
    if not v[name] > 0:
        raise DomainError(f"{name} must be positive, got {v[name]:.6g}")
    return v[name]


def _main_regime(v: Params) -> bool:
    n, s, log_p = v["n"], v["s"], math.log(v["p"])
    return (
        s <= math.sqrt(n / (7168.0 * math.log(16.0 * n)))
        and 4.0 * math.log(16.0 * n) <= log_p <= n / (1792.0 * s * s)
    )


def _small_p_regime(v: Params) -> bool:
    n = v["n"]
    return n >= 17 and math.log(v["p"]) <= (n - 1.0) / 16.0 - math.log(n)


def _always(v: Params) -> bool:
    return True


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

def _main_ub_wbp2(v: Params) -> float:
    return v["noise_norm"] * (2.0 + 8.0 * (7.0 * v["n"] / _log_p(v)) ** 0.25)


def _floor_ub_wbp2(v: Params) -> float:
    return v["noise_norm"] * (2.0 + 32.0 * math.sqrt(14.0) * math.sqrt(v["s"]))


def _lb_wbp2(v: Params) -> float:
    return v["noise_norm"] / (3.0 * math.sqrt(2.0)) * math.sqrt(1.0 / _log_p(v))


def _prop1_ub_wbp1(v: Params) -> float:
    K = _positive_k(v)
    M = _positive(v, "M")
    return (1.0 + 8.0 / K + 2.0 / math.sqrt(K)) * v["wI_l1"] + 2.0 * v["noise_norm"] / math.sqrt(K * M)


def _prop2_ub_wbp2(v: Params) -> float:
    return v["noise_norm"] + math.sqrt(v["M"]) * v["wBP_l1"]


def _cor3_ub_wbp2(v: Params) -> float:
    K = _positive_k(v)
    root_k = math.sqrt(K)
    return (1.0 + 2.0 / root_k) * v["noise_norm"] + math.sqrt(v["M"]) * (
        1.0 + 8.0 / K + 2.0 / root_k
    ) * v["wI_l1"]


def _prop4_ub_wi1(v: Params) -> float:
    return v["noise_norm"] * math.sqrt(1.0 + 1.5 * v["n"] / _log_p(v))


def _prop4d_ub_wi1(v: Params) -> float:
    n, free = v["n"], v["p"] - v["s"]
    argument = C_CONSTANT * free / n
    if argument <= 1.0:
        raise DomainError(f"C (p - s) / n = {argument:.6g} must exceed 1")
    denominator = math.sqrt(2.0 * math.log(argument)) - 1.0
    if denominator <= 0.0:
        raise DomainError(f"sqrt(2 ln(C (p - s) / n)) = {denominator + 1.0:.6g} must exceed 1")
    return v["noise_norm"] * math.sqrt(1.0 + (n + math.sqrt(2.0) * math.sqrt(n - 1.0)) / denominator**2)


def _prop5_ub_m(v: Params) -> float:
    return 2.0 * math.sqrt(7.0) * math.sqrt(_log_p(v) / v["n"])


def _lb_m(v: Params) -> float:
    return math.sqrt(2.0) / 8.0 * math.sqrt(_log_p(v) / v["n"])


def _lb_m_regime(v: Params) -> bool:
    n, p = v["n"], v["p"]
    half = math.floor(p / 2)
    return p > n and half >= 1 and math.log(half) < (2.0 - math.sqrt(3.0)) * n / 4.0


def _lb_wi1(v: Params) -> float:
    return v["noise_norm"] * math.sqrt(1.0 + v["n"] / (9.0 * _log_p(v)))


def _lb_wi1_strong(v: Params) -> float:
    n, free = v["n"], v["p"] - v["s"]
    if n <= 1 or free <= 1:
        raise DomainError(f"needs n > 1 and p - s > 1, got n={n}, p - s={free}")
    return v["noise_norm"] * math.sqrt(1.0 + (n - 1.0) / (4.0 * math.log(n) + 4.0 * math.log(free)))


def _lb_wi1_strong_regime(v: Params) -> bool:
    n, free = v["n"], v["p"] - v["s"]
    return n >= 17 and free >= 1 and math.log(free) <= (n - 1.0) / 16.0 - math.log(n)


def _ub_wbp1(v: Params) -> float:
    return UB_WBP1_CONSTANT * math.sqrt(v["n"] / _log_p(v)) * v["noise_norm"]


def _lb_wbp1(v: Params) -> float:
    return math.sqrt(v["n"] / _log_p(v)) * v["noise_norm"] / 3.0


def _l2_expected_sq_error(v: Params) -> float:
    n, p = v["n"], v["p"]
    if p < n + 2:
        raise DomainError(f"needs p >= n + 2, got n={n}, p={p}")
    return v["beta_norm"] ** 2 * (1.0 - n / p) + v["sigma"] ** 2 * n / (p - n - 1.0)


def _emp_lb_wi1_b1(v: Params) -> float:
    return v["noise_norm"] ** 2 / _positive(v, "b1")


def _emp_ub_wi1_b5n(v: Params) -> float:
    return v["noise_norm"] ** 2 / _positive(v, "b5n")


def _emp_ub_wi1_lp(v: Params) -> float:
    if math.isnan(v["lp_value"]) or v["lp_value"] < 0:
        raise DomainError(f"relaxed LP value {v['lp_value']} is not a bound")
    return v["lp_value"]


def _sparsity_lb_wbp2(v: Params) -> float:
    return v["wBP_l1"] / math.sqrt(v["n"] + v["s"])


def _distortion_ratio_l2(v: Params) -> float:
    return v["wBP_l2_unscaled"] / _positive(v, "wBP_l2")


def _distortion_regime(v: Params) -> bool:
    ratio = _distortion_ratio_l2(v)
    return 1.0 / math.sqrt(2.0) <= ratio <= math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_UPPER, _LOWER = BoundKind.UPPER, BoundKind.LOWER
_CF = BoundSource.CLOSED_FORM

BOUNDS: Dict[str, BoundSpec] = {
    spec.bound_id: spec
    for spec in (
        BoundSpec(
            "main_ub_wBP2", _UPPER, BoundTarget.WBP_L2, _CF, ("n", "p", "s", "noise_norm"),
            _main_ub_wbp2, _main_regime,
            "(2 + 8 (7n / ln p)^(1/4)) ||eps||_2",
        ),
        BoundSpec(
            "floor_ub_wBP2", _UPPER, BoundTarget.WBP_L2, _CF, ("n", "s", "noise_norm"),
            _floor_ub_wbp2,
            lambda v: v["s"] <= math.sqrt(v["n"] / (7168.0 * math.log(16.0 * v["n"]))),
            "descent floor (2 + 32 sqrt(14) sqrt(s)) ||eps||_2",
        ),
        BoundSpec(
            "lb_wBP2", _LOWER, BoundTarget.WBP_L2, _CF, ("n", "p", "s", "noise_norm"),
            _lb_wbp2, lambda v: _small_p_regime(v) and v["n"] >= v["s"],
            "||eps||_2 / (3 sqrt(2) sqrt(ln p))",
        ),
        BoundSpec(
            "prop1_ub_wBP1", _UPPER, BoundTarget.WBP_L1, _CF, ("K", "M", "wI_l1", "noise_norm"),
            _prop1_ub_wbp1, _always,
            "(1 + 8/K + 2/sqrt(K)) ||w^I||_1 + 2 ||eps||_2 / sqrt(K M)",
        ),
        BoundSpec(
            "prop2_ub_wBP2", _UPPER, BoundTarget.WBP_L2, _CF, ("M", "wBP_l1", "noise_norm"),
            _prop2_ub_wbp2, _always,
            "||eps||_2 + sqrt(M) ||w^BP||_1",
        ),
        BoundSpec(
            "cor3_ub_wBP2", _UPPER, BoundTarget.WBP_L2, _CF, ("K", "M", "wI_l1", "noise_norm"),
            _cor3_ub_wbp2, _always,
            "(1 + 2/sqrt(K)) ||eps||_2 + sqrt(M) (1 + 8/K + 2/sqrt(K)) ||w^I||_1",
        ),
        BoundSpec(
            "prop4_ub_wI1", _UPPER, BoundTarget.WI_L1, _CF, ("n", "p", "noise_norm"),
            _prop4_ub_wi1,
            lambda v: v["n"] >= 100 and math.log(v["p"]) >= 4.0 * math.log(16.0 * v["n"]),
            "||eps||_2 sqrt(1 + (3n/2) / ln p)",
        ),
        BoundSpec(
            "prop4d_ub_wI1", _UPPER, BoundTarget.WI_L1, _CF, ("n", "p", "s", "noise_norm"),
            _prop4d_ub_wi1,
            lambda v: v["p"] - v["s"] >= v["n"] * math.exp(9.0 / 8.0) / C_CONSTANT,
            "||eps||_2 sqrt(1 + (n + sqrt(2) sqrt(n-1)) / (sqrt(2 ln(C (p-s) / n)) - 1)^2)",
        ),
        BoundSpec(
            "prop5_ub_M", _UPPER, BoundTarget.M, _CF, ("n", "p"),
            _prop5_ub_m, lambda v: math.log(v["p"]) <= v["n"] / 36.0,
            "2 sqrt(7) sqrt(ln p / n)",
        ),
        BoundSpec(
            "lb_M", _LOWER, BoundTarget.M, _CF, ("n", "p"),
            _lb_m, _lb_m_regime,
            "(sqrt(2) / 8) sqrt(ln p / n)",
        ),
        BoundSpec(
            "lb_wI1", _LOWER, BoundTarget.WI_L1, _CF, ("n", "p", "noise_norm"),
            _lb_wi1, _small_p_regime,
            "||eps||_2 sqrt(1 + n / (9 ln p))",
        ),
        BoundSpec(
            "lb_wI1_strong", _LOWER, BoundTarget.WI_L1, _CF, ("n", "p", "s", "noise_norm"),
            _lb_wi1_strong, _lb_wi1_strong_regime,
            "||eps||_2 sqrt(1 + (n-1) / (4 ln n + 4 ln(p-s)))",
        ),
        BoundSpec(
            "ub_wBP1", _UPPER, BoundTarget.WBP_L1, _CF, ("n", "p", "s", "noise_norm"),
            _ub_wbp1, _main_regime,
            "(4 sqrt(2) + sqrt(1 / (2 sqrt(7)))) sqrt(n / ln p) ||eps||_2",
        ),
        BoundSpec(
            "lb_wBP1", _LOWER, BoundTarget.WBP_L1, _CF, ("n", "p", "noise_norm"),
            _lb_wbp1, _small_p_regime,
            "(1/3) sqrt(n / ln p) ||eps||_2",
        ),
        BoundSpec(
            "l2_expected_sq_error", BoundKind.EXPECTATION, BoundTarget.WL2_L2SQ, _CF,
            ("n", "p", "beta_norm", "sigma"),
            _l2_expected_sq_error, _always,
            "||beta||^2 (1 - n/p) + sigma^2 n / (p - n - 1)",
        ),
        BoundSpec(
            "emp_lb_wI1_B1", _LOWER, BoundTarget.WI_L1, BoundSource.EMPIRICAL_VECTOR,
            ("noise_norm", "b1"),
            _emp_lb_wi1_b1, _always,
            "||eps||_2^2 / B_(1)^T(-eps)",
        ),
        BoundSpec(
            "emp_ub_wI1_B5n", _UPPER, BoundTarget.WI_L1, BoundSource.EMPIRICAL_VECTOR,
            ("n", "p", "s", "noise_norm", "b5n"),
            _emp_ub_wi1_b5n, lambda v: 5 * v["n"] <= v["p"] - v["s"],
            "||eps||_2^2 / B_(5n)^T(-eps)",
        ),
        BoundSpec(
            "emp_ub_wI1_lp", _UPPER, BoundTarget.WI_L1, BoundSource.EMPIRICAL_LP,
            ("lp_value",),
            _emp_ub_wi1_lp, _always,
            "max lambda^T(-eps) s.t. B_(i)^T lambda <= 1, i = 1..q",
        ),
        BoundSpec(
            "sparsity_lb_wBP2", _LOWER, BoundTarget.WBP_L2, _CF, ("n", "s", "wBP_l1"),
            _sparsity_lb_wbp2, _always,
            "||w^BP||_1 / sqrt(n + s)",
        ),
        BoundSpec(
            "distortion_ratio_l2", BoundKind.DIAGNOSTIC, BoundTarget.WBP_L2, _CF,
            ("wBP_l2", "wBP_l2_unscaled"),
            _distortion_ratio_l2, _distortion_regime,
            "||w^BP unscaled||_2 / ||w^BP||_2",
        ),
    )
}

BOUND_IDS: Tuple[str, ...] = tuple(BOUNDS)


def bound_spec(bound_id: str) -> BoundSpec:
    """Look up a bound definition."""
    try:
        return BOUNDS[bound_id]
    except KeyError:
        raise UnknownBound(
            f"Unknown bound '{bound_id}'; valid identifiers: {', '.join(BOUND_IDS)}"
        ) from None


def eval_bound(bound_id: str, params: Params) -> LedgerEntry:
    """
    Evaluate one bound.

    Args:
        bound_id: Stable identifier
        params: Symbol values; missing or None entries count as absent

    Returns:
        LedgerEntry with value and regime flag

    Raises:
        UnknownBound: unrecognized identifier
        MissingParam: a symbol the formula reads is absent
        DomainError: the formula is undefined at these values
    """
    spec = bound_spec(bound_id)
    values: Dict[str, float] = {}
    for name in spec.params:
        if params.get(name) is None:
            raise MissingParam(bound_id, name)
        values[name] = float(params[name])

    value = spec.formula(values)
    if math.isnan(value) or value < 0:
        raise DomainError(f"{bound_id} evaluated to {value}")
    try:
        regime_ok = bool(spec.regime(values))
    except (ValueError, ZeroDivisionError, OverflowError):
        regime_ok = False
    return LedgerEntry(
        bound_id=bound_id,
        value=value,
        kind=spec.kind,
        target=spec.target,
        source=spec.source,
        regime_ok=regime_ok,
    )
