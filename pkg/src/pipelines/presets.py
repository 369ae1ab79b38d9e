"""
Named figure presets.

Each preset is a complete SweepSpec at desk scale. Where the parameters are
smaller than the published figures, the preset says so in its notes, and the
notes are copied into the CSV metadata.
"""

import logging
from typing import Callable, Dict, Tuple

import numpy as np

from src.models.data_models import CurveSpec, SweepSpec
from src.models.errors import UnknownPreset

logger = logging.getLogger(__name__)


def p_grid(start: float, stop: float, steps: int) -> Tuple[int, ...]:
    """Log-spaced integer grid, deduplicated and sorted."""
    values = np.unique(np.rint(np.geomspace(start, stop, steps)).astype(int))
    return tuple(int(v) for v in values)


def _fig_wI(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(20,),
        p_values=p_grid(120, 10_000, 15),
        curves=(CurveSpec("eps=0.01", s=1, beta_norm=1.0, noise_level=0.01),),
        trials=50,
        base_seed=base_seed,
        estimators=("wI",),
        bounds=("prop4d_ub_wI1", "emp_ub_wI1_B5n", "emp_ub_wI1_lp", "emp_lb_wI1_B1"),
        figure_preset="fig_wI",
        plot_quantities=("wI_l1", "prop4d_ub_wI1", "emp_ub_wI1_B5n", "emp_ub_wI1_lp", "emp_lb_wI1_B1"),
        notes=("prop4d_ub_wI1 is undefined for p - s below about 525 at n = 20",),
    )


def _fig_M(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(300, 1200),
        p_values=p_grid(1_000, 10_000, 6),
        curves=(CurveSpec("M", s=1, beta_norm=1.0, noise_level=0.01),),
        trials=30,
        base_seed=base_seed,
        estimators=("M",),
        bounds=("prop5_ub_M", "lb_M"),
        figure_preset="fig_M",
        plot_quantities=("M", "prop5_ub_M", "lb_M"),
        notes=("desk scale: p up to 1e4 (published figure reaches 1e5)",),
    )


def _fig_WB(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(500,),
        p_values=p_grid(600, 10_000, 10),
        curves=(
            CurveSpec("s=1", s=1, beta_norm=1.0, noise_level=0.01),
            CurveSpec("s=2", s=2, beta_norm=1.0, noise_level=0.01),
        ),
        trials=20,
        base_seed=base_seed,
        estimators=("bp", "wI", "M"),
        bounds=("cor3_ub_wBP2", "prop2_ub_wBP2", "prop1_ub_wBP1"),
        figure_preset="fig_WB",
        plot_quantities=("bp_l2", "cor3_ub_wBP2"),
        notes=("cor3_ub_wBP2 uses the exact M and ||w^I||_1 of each trial",),
    )


def _fig_change_n(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(100, 250, 500),
        p_values=p_grid(20, 20_000, 20),
        curves=(CurveSpec("eps=0.01", s=1, beta_norm=1.0, noise_level=0.01),),
        trials=20,
        base_seed=base_seed,
        estimators=("bp", "min_mse"),
        figure_preset="fig_change_n",
        plot_quantities=("bp_l2",),
        notes=(
            "desk scale: n in {100, 250, 500}",
            "below p = n the BP column holds the min-MSE model error",
        ),
    )


def _fig_change_noise(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(100,),
        p_values=p_grid(20, 20_000, 20),
        curves=tuple(
            CurveSpec(f"eps={level:g}", s=1, beta_norm=1.0, noise_level=level)
            for level in (0.01, 0.04, 0.16)
        ),
        trials=20,
        base_seed=base_seed,
        estimators=("bp", "min_mse"),
        figure_preset="fig_change_noise",
        plot_quantities=("bp_l2",),
        notes=("below p = n the BP column holds the min-MSE model error",),
    )


def _fig_compare(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(250,),
        p_values=p_grid(120, 10_000, 15),
        curves=(
            CurveSpec("s=1 beta=1", s=1, beta_norm=1.0, noise_level=0.01),
            CurveSpec("s=100 beta=1", s=100, beta_norm=1.0, noise_level=0.01),
            CurveSpec("s=100 beta=0.1", s=100, beta_norm=0.1, noise_level=0.01),
        ),
        trials=20,
        base_seed=base_seed,
        estimators=("bp", "min_l2", "min_mse"),
        bounds=("l2_expected_sq_error",),
        figure_preset="fig_compare",
        plot_quantities=("bp_l2", "min_l2_l2"),
        notes=(
            "desk scale: n = 250 (published figure uses n = 500)",
            "below p = n the BP and min-l2 columns hold the min-MSE model error",
        ),
    )


def _fig_validate_n(base_seed: int) -> SweepSpec:
    return SweepSpec(
        n_values=(500, 1000, 2000),
        p_values=(5000,),
        curves=(
            CurveSpec("s=1 eps=0.15", s=1, beta_norm=1.0, noise_level=0.15),
            CurveSpec("s=20 eps=0.15", s=20, beta_norm=1.0, noise_level=0.15),
            CurveSpec("s=20 eps=0.6", s=20, beta_norm=1.0, noise_level=0.6),
        ),
        trials=20,
        base_seed=base_seed,
        estimators=("bp",),
        figure_preset="fig_validate_n",
        report_n_scaled=True,
        plot_quantities=("bp_l2_n4",),
        plot_axis="n",
        plot_log_y=False,
        notes=("desk scale: n in {500, 1000, 2000} (published figure extends to 4000)",),
    )


PRESETS: Dict[str, Callable[[int], SweepSpec]] = {
    "fig_wI": _fig_wI,
    "fig_M": _fig_M,
    "fig_WB": _fig_WB,
    "fig_change_n": _fig_change_n,
    "fig_change_noise": _fig_change_noise,
    "fig_compare": _fig_compare,
    "fig_validate_n": _fig_validate_n,
}


def figure_preset(name: str, base_seed: int = 0) -> SweepSpec:
    """
    Build the SweepSpec for a named figure.

    Raises:
        UnknownPreset: if name is not a known preset
    """
    builder = PRESETS.get(name)
    if builder is None:
        raise UnknownPreset(f"Unknown preset '{name}'; valid presets: {', '.join(PRESETS)}")
    spec = builder(base_seed)
    for note in spec.notes:
        if note.startswith("desk scale"):
            logger.warning(f"{name}: {note}")
    return spec
