"""
Command-line front end.

    bpdd solve    --n 50 --p 400 --s 2 --noise-norm 0.01
    bpdd bounds   --n 20 --p 2000 --bounds emp_lb_wI1_B1,emp_ub_wI1_lp
    bpdd sweep    --n 100 --p 200:20000:15-log --trials 20 --seed 42
    bpdd figure   --figure fig_M --out results/
    bpdd selftest

Exit codes: 0 success, 1 usage, 2 runtime or solver failure, 3 selftest failure.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence, Tuple

import numpy as np

from config.solver_config import SolverConfig
from src import __version__
from src.bounds.catalog import BOUND_IDS
from src.bounds.incoherence import incoherence
from src.bounds.ledger import bound_ledger
from src.generation.model_gen import generate_training_set
from src.generation.rng import trial_stream
from src.models.data_models import (
    ESTIMATORS,
    CurveSpec,
    InterpolatorOutputs,
    NoiseMode,
    RunConfig,
    SweepSpec,
    TrainingSet,
)
from src.models.errors import (
    DegeneratePlot,
    DimensionMismatch,
    DoubleDescentError,
    UnknownPreset,
    UsageError,
)
from src.monitoring.invariant_monitor import selftest
from src.pipelines.presets import PRESETS, figure_preset
from src.pipelines.sweep_pipeline import (
    CUSTOM_FIGURE,
    extract_minima,
    failed_cells,
    run_trial,
    sweep,
    table_to_frame,
)
from src.reporting.csv_writer import emit_csv, ledger_frame, sweep_metadata
from src.reporting.svg_plot import PlotSpec, emit_svg
from src.solvers.interpolators import basis_pursuit, min_l2_overfit, noise_interpolator

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_SELFTEST = 0, 1, 2, 3
FORMATS = ("csv", "svg")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def parse_grid(text: str) -> Tuple[int, ...]:
    """
    Parse `a,b,c` or `a:b:steps` / `a:b:steps-log` into a sorted integer grid.
    """
    try:
        if ":" in text:
            start, stop, steps = text.split(":")
            log = steps.endswith("-log")
            count = int(steps[:-4] if log else steps)
            if count < 1:
                raise ValueError("steps must be positive")
            space = np.geomspace if log else np.linspace
            values = np.rint(space(float(start), float(stop), count)).astype(int)
        else:
            values = np.array([int(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise UsageError(f"invalid grid '{text}': {exc}") from exc
    if values.size == 0 or np.any(values < 1):
        raise UsageError(f"grid '{text}' must contain positive integers")
    return tuple(int(v) for v in np.unique(values))


def _parse_list(text: str, valid: Sequence[str], what: str) -> Tuple[str, ...]:
    items = tuple(item.strip() for item in text.split(",") if item.strip())
    unknown = [item for item in items if item not in valid]
    if unknown:
        raise UsageError(f"unknown {what}: {', '.join(unknown)}; valid: {', '.join(valid)}")
    return items


def _build_parser() -> _Parser:
    parser = _Parser(prog="bpdd", description="Basis Pursuit double descent toolkit")
    parser.add_argument("--version", action="version", version=f"bpdd {__version__}")

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Base seed")
    common.add_argument("--out", default="results", help="Output directory")
    common.add_argument("--format", default="csv,svg", help="Comma list of csv, svg")
    common.add_argument("--tolerance-scale", type=float, default=1.0, help="Multiply all tolerances")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    instance = _Parser(add_help=False)
    instance.add_argument("--n", default="100", help="Sample count(s): list or a:b:steps[-log]")
    instance.add_argument("--p", default="1000", help="Feature count(s): list or a:b:steps[-log]")
    instance.add_argument("--s", type=int, default=1, help="Sparsity")
    instance.add_argument("--beta-norm", type=float, default=1.0, help="||beta||_2")
    noise = instance.add_mutually_exclusive_group()
    noise.add_argument("--noise-norm", type=float, help="Exact ||eps||_2 (default 0.01)")
    noise.add_argument("--sigma", type=float, help="Gaussian noise level sigma")
    instance.add_argument("--trials", type=int, default=20, help="Trials per cell")
    instance.add_argument("--estimators", default="bp", help=f"Comma list of {', '.join(ESTIMATORS)}")
    instance.add_argument("--bounds", default="", help="Comma list of bound identifiers")

    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    commands.add_parser("solve", parents=[common, instance], help="Solve one instance")
    commands.add_parser("bounds", parents=[common, instance], help="Bound ledger of one instance")
    commands.add_parser("sweep", parents=[common, instance], help="Monte-Carlo sweep")
    figure = commands.add_parser("figure", parents=[common], help="Run a figure preset")
    figure.add_argument("--figure", required=True, help=f"One of {', '.join(PRESETS)}")
    figure.add_argument("--trials", type=int, help="Override the preset trial count")
    commands.add_parser("selftest", parents=[common], help="Deterministic invariant suite")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Parse a command line into a RunConfig.

    Raises:
        UsageError: unknown flags, bad values, or unknown preset/bound names
    """
    args = _build_parser().parse_args(list(argv) if argv is not None else None)
    formats = list(_parse_list(args.format, FORMATS, "format"))
    if args.tolerance_scale < 0:
        raise UsageError("--tolerance-scale must be non-negative")

    spec: Optional[SweepSpec] = None
    if args.command == "figure":
        try:
            spec = figure_preset(args.figure, base_seed=args.seed)
        except UnknownPreset as exc:
            raise UsageError(str(exc)) from exc
        if args.trials is not None:
            spec = dataclasses.replace(spec, trials=args.trials)
    elif args.command in ("solve", "bounds", "sweep"):
        spec = _instance_spec(args)

    return RunConfig(
        command=args.command,
        output_dir=args.out,
        formats=formats,
        seed=args.seed,
        preset=getattr(args, "figure", None),
        spec=spec,
        tolerance_scale=args.tolerance_scale,
        verbose=args.verbose,
    )


def _instance_spec(args: argparse.Namespace) -> SweepSpec:
    if args.sigma is not None:
        mode, level = NoiseMode.GAUSSIAN_SIGMA, args.sigma
    else:
        mode, level = NoiseMode.EXACT_NORM, args.noise_norm if args.noise_norm is not None else 0.01
    n_values, p_values = parse_grid(args.n), parse_grid(args.p)
    trials = args.trials
    if args.command in ("solve", "bounds"):
        if len(n_values) != 1 or len(p_values) != 1:
            raise UsageError(f"{args.command} takes a single --n and --p")
        trials = 1
    bounds = _parse_list(args.bounds, BOUND_IDS, "bound") if args.bounds else ()
    if args.command == "bounds" and not bounds:
        bounds = BOUND_IDS
    try:
        return SweepSpec(
            n_values=n_values,
            p_values=p_values,
            curves=(CurveSpec(f"s={args.s} beta={args.beta_norm:g} eps={level:g}", args.s, args.beta_norm, level),),
            trials=trials,
            base_seed=args.seed,
            estimators=_parse_list(args.estimators, ESTIMATORS, "estimator"),
            bounds=bounds,
            noise_mode=mode,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    try:
        run = parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if run.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    config = SolverConfig.from_env().scaled(run.tolerance_scale)
    try:
        config.validate()
        if run.command == "selftest":
            report = selftest(config)
            print(report.render())
            return EXIT_OK if report.passed else EXIT_SELFTEST
        if run.command in ("solve", "bounds"):
            _run_single(run, config)
        else:
            _run_sweep(run, config)
    except (DoubleDescentError, ValueError) as exc:
        logger.error(f"{run.command} failed: {exc}")
        return EXIT_RUNTIME
    return EXIT_OK


def _run_single(run: RunConfig, config: SolverConfig) -> None:
    spec = run.spec
    assert spec is not None
    curve = spec.curves[0]
    n, p = spec.n_values[0], spec.p_values[0]
    stream = trial_stream(spec.base_seed, CUSTOM_FIGURE, 0, 0, 0)
    ts = generate_training_set(n, p, curve.s, curve.beta_norm, curve.noise_level, stream, spec.noise_mode)
    print(f"instance n={n} p={p} s={curve.s} ||eps||_2={ts.noise_norm:.6g} seed={spec.base_seed}")

    if run.command == "solve":
        result = run_trial(spec, ts, config)
        for name, value in result.quantities.items():
            print(f"  {name:<24} {value:.12g}")
        return

    ledger = bound_ledger(ts, _exact_outputs(ts, config), config, spec.bounds)
    frame = ledger_frame(ledger)
    print(frame.to_string(index=False))
    if "csv" in run.formats:
        emit_csv(frame, Path(run.output_dir) / "bounds.csv", [("seed", str(spec.base_seed))])


def _exact_outputs(ts: TrainingSet, config: SolverConfig) -> InterpolatorOutputs:
    """Every exact quantity a bound can be compared against, within its regime."""
    exact = InterpolatorOutputs(incoherence=incoherence(ts.design, config) if ts.p >= 2 else None)
    if ts.p >= ts.n:
        exact.bp = basis_pursuit(ts, config)
        exact.min_l2 = min_l2_overfit(ts, config)
    if ts.noise_norm > 0 and ts.p - ts.s >= ts.n:
        exact.wI = noise_interpolator(ts, config)
    return exact


def _run_sweep(run: RunConfig, config: SolverConfig) -> None:
    spec = run.spec
    assert spec is not None
    table = sweep(spec, config)
    for curve, n, p in sorted(failed_cells(table)):
        logger.warning(f"Every trial failed in cell ({curve}, n={n}, p={p})")

    name = run.preset or "sweep"
    out = Path(run.output_dir)
    plot = PlotSpec.for_sweep(spec)
    csv_path = emit_csv(table_to_frame(table), out / f"{name}.csv", sweep_metadata(spec))
    if "svg" in run.formats:
        try:
            emit_svg(csv_path, plot, out / f"{name}.svg")
        except DegeneratePlot as exc:
            logger.warning(f"SVG skipped for {name}: {exc}")
    if "csv" not in run.formats:
        csv_path.unlink()

    for quantity in plot.quantities:
        try:
            minima = extract_minima(table, quantity, plot.axis)
        except DimensionMismatch as exc:
            logger.debug(f"No minimum for {quantity}: {exc}")
            continue
        for label, (where, value) in minima.items():
            logger.info(f"min {quantity} [{label}] = {value:.6g} at {plot.axis}={where}")
