"""
Static SVG plots of sweep tables.

Plots are drawn from the CSV on disk, never from in-memory results, so a
figure can always be regenerated from its table.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from src.models.data_models import SweepSpec  # noqa: E402
from src.models.errors import DegeneratePlot, ReportIoError  # noqa: E402
from src.pipelines.sweep_pipeline import series_keys  # noqa: E402
from src.reporting.csv_writer import read_results  # noqa: E402

logger = logging.getLogger(__name__)

HASH_SALT = "bpdd"

_AXIS_LABELS = {"p": "number of features p", "n": "number of samples n"}


@dataclass(frozen=True)
class PlotSpec:
    """What to draw from a sweep table."""
    quantities: Tuple[str, ...]
    axis: str = "p"
    log_y: bool = True
    title: str = ""
    stat: str = "median"

    @classmethod
    def for_sweep(cls, spec: SweepSpec) -> "PlotSpec":
        quantities = spec.plot_quantities or _default_quantities(spec)
        return cls(
            quantities=quantities,
            axis=spec.plot_axis,
            log_y=spec.plot_log_y,
            title=spec.figure_preset or "",
        )


_ESTIMATOR_QUANTITY = {"bp": "bp_l2", "min_l2": "min_l2_l2", "min_mse": "min_mse_l2", "wI": "wI_l1", "M": "M"}


def _default_quantities(spec: SweepSpec) -> Tuple[str, ...]:
    chosen = tuple(_ESTIMATOR_QUANTITY[name] for name in spec.estimators)
    return chosen or ("noise_l2",)


def emit_svg(
    source: Union[str, Path, pd.DataFrame],
    plot: PlotSpec,
    path: Union[str, Path],
) -> List[str]:
    """
    Render one polyline per (series, quantity) with a log10 x-axis.

    Args:
        source: CSV written by emit_csv, or the equivalent frame
        plot: Quantities and axes
        path: Destination SVG

    Returns:
        Legend labels of the drawn polylines, in drawing order

    Raises:
        DegeneratePlot: fewer than 2 points per curve, curves of unequal
            length, or a quantity missing from the table
        ReportIoError: unwritable destination
    """
    frame = source if isinstance(source, pd.DataFrame) else read_results(source)[1]
    series = series_keys(frame, plot.axis)
    lengths = {len(rows) for _, rows in series}
    if len(lengths) > 1:
        raise DegeneratePlot(f"curves have different lengths: {sorted(lengths)}")
    if not series or min(lengths) < 2:
        raise DegeneratePlot(f"need at least 2 points per curve along {plot.axis}")
    for quantity in plot.quantities:
        if f"{quantity}_{plot.stat}" not in frame.columns:
            raise DegeneratePlot(f"no column '{quantity}_{plot.stat}' to plot")

    plt.rcParams["svg.hashsalt"] = HASH_SALT
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    drawn: List[str] = []
    try:
        for name, rows in series:
            x = rows[plot.axis].to_numpy(dtype=float)
            for quantity in plot.quantities:
                y = rows[f"{quantity}_{plot.stat}"].to_numpy(dtype=float)
                if np.count_nonzero(np.isfinite(y)) < 2:
                    logger.warning(f"Skipping {quantity} for '{name}': fewer than 2 finite points")
                    continue
                label = quantity if len(series) == 1 else f"{quantity} ({name})"
                ax.plot(x, y, marker="o", markersize=3, linewidth=1, label=label)
                drawn.append(label)

        ax.set_xscale("log")
        if plot.log_y and _all_positive(ax):
            ax.set_yscale("log")
        ax.set_xlabel(_AXIS_LABELS.get(plot.axis, plot.axis))
        ax.set_ylabel(plot.stat)
        if plot.title:
            ax.set_title(plot.title)
        ax.spines["right"].set_visible(False)
        ax.spines["top"].set_visible(False)
        if drawn:
            ax.legend(fontsize=7)
        fig.tight_layout()

        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(target, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise ReportIoError(f"Cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    logger.info(f"Wrote {len(drawn)} curve(s) to {path}")
    return drawn


def _all_positive(ax: plt.Axes) -> bool:
    values = [line.get_ydata() for line in ax.get_lines()]
    if not values:
        return False
    stacked = np.concatenate([np.asarray(v, dtype=float) for v in values])
    finite = stacked[np.isfinite(stacked)]
    return finite.size > 0 and bool(np.all(finite > 0))
