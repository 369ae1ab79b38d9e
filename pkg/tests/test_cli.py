"""
Tests for the command-line front end.
"""

import logging

import pytest

from src.cli import EXIT_OK, EXIT_RUNTIME, EXIT_SELFTEST, EXIT_USAGE, main, parse_args, parse_grid
from src.models.data_models import NoiseMode, SelftestReport, Violation
from src.models.errors import UsageError


@pytest.mark.unit
def test_figure_command_builds_preset():
    run = parse_args(["figure", "--figure", "fig_M", "--out", "results/"])
    assert run.command == "figure"
    assert run.preset == "fig_M"
    assert run.output_dir == "results/"
    assert run.spec.n_values == (300, 1200)
    assert run.formats == ["csv", "svg"]


@pytest.mark.unit
def test_figure_trials_override():
    run = parse_args(["figure", "--figure", "fig_wI", "--trials", "3", "--seed", "4"])
    assert run.spec.trials == 3
    assert run.spec.base_seed == 4


@pytest.mark.unit
def test_sweep_command_with_log_grid():
    run = parse_args(
        ["sweep", "--n", "100", "--p", "200:20000:15-log", "--s", "1",
         "--noise-norm", "0.01", "--trials", "20", "--seed", "42"]
    )
    spec = run.spec
    assert len(spec.p_values) == 15
    assert spec.p_values[0] == 200 and spec.p_values[-1] == 20000
    assert spec.n_values == (100,)
    assert spec.trials == 20
    assert spec.base_seed == 42
    assert spec.noise_mode is NoiseMode.EXACT_NORM
    assert spec.curves[0].noise_level == 0.01


@pytest.mark.unit
def test_sigma_selects_gaussian_noise():
    run = parse_args(["sweep", "--sigma", "0.2"])
    assert run.spec.noise_mode is NoiseMode.GAUSSIAN_SIGMA
    assert run.spec.curves[0].noise_level == 0.2


@pytest.mark.unit
@pytest.mark.parametrize(
    "text, expected",
    [
        ("10,30,20", (10, 20, 30)),
        ("10:50:5", (10, 20, 30, 40, 50)),
        ("10:1000:3-log", (10, 100, 1000)),
    ],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.unit
@pytest.mark.parametrize("text", ["", "a,b", "1:2", "0,5", "10:100:0"])
def test_parse_grid_rejects_bad_input(text):
    with pytest.raises(UsageError):
        parse_grid(text)


@pytest.mark.unit
@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["figure", "--figure", "nope"], "fig_wI"),
        (["sweep", "--bounds", "bogus"], "main_ub_wBP2"),
        (["sweep", "--estimators", "lasso"], "min_l2"),
        (["sweep", "--format", "png"], "csv"),
        (["sweep", "--noise-norm", "0.1", "--sigma", "0.1"], "not allowed"),
        (["sweep", "--unknown-flag"], "unrecognized"),
        (["solve", "--p", "10,20"], "single"),
        (["sweep", "--trials", "0"], "trials"),
        ([], "required"),
    ],
)
def test_usage_errors(argv, fragment):
    with pytest.raises(UsageError, match=fragment):
        parse_args(argv)


@pytest.mark.unit
def test_main_returns_usage_exit_code(capsys):
    assert main(["figure", "--figure", "nope"]) == EXIT_USAGE
    assert "valid presets" in capsys.readouterr().err


@pytest.mark.integration
def test_solve_prints_summary(capsys):
    assert main(["solve", "--n", "10", "--p", "40", "--s", "1", "--estimators", "bp,wI"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "instance n=10 p=40" in out
    assert "bp_l2" in out
    assert "wI_l1" in out


@pytest.mark.integration
def test_bounds_writes_ledger(tmp_path, capsys):
    argv = ["bounds", "--n", "20", "--p", "300", "--bounds", "emp_lb_wI1_B1,emp_ub_wI1_lp",
            "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert "emp_ub_wI1_lp" in capsys.readouterr().out
    text = (tmp_path / "bounds.csv").read_text(encoding="utf-8")
    assert text.startswith("# seed=0\n")
    assert "emp_lb_wI1_B1" in text


@pytest.mark.integration
def test_sweep_writes_csv_and_svg(tmp_path):
    argv = ["sweep", "--n", "8", "--p", "16,32", "--trials", "2", "--estimators", "bp",
            "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert (tmp_path / "sweep.csv").exists()
    assert (tmp_path / "sweep.svg").exists()


@pytest.mark.integration
def test_svg_only_format_leaves_no_csv(tmp_path):
    argv = ["sweep", "--n", "8", "--p", "16,32", "--trials", "1", "--format", "svg",
            "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert not (tmp_path / "sweep.csv").exists()
    assert (tmp_path / "sweep.svg").exists()


@pytest.mark.integration
def test_single_point_sweep_skips_svg(tmp_path, caplog):
    argv = ["sweep", "--n", "10", "--p", "40", "--trials", "2", "--estimators", "bp",
            "--out", str(tmp_path)]
    with caplog.at_level(logging.WARNING, logger="src.cli"):
        assert main(argv) == EXIT_OK
    assert (tmp_path / "sweep.csv").exists()
    assert not (tmp_path / "sweep.svg").exists()
    assert "SVG skipped for sweep" in caplog.text


@pytest.mark.unit
def test_selftest_exit_codes(monkeypatch, capsys):
    from src import cli

    monkeypatch.setattr(cli, "selftest", lambda config: SelftestReport(runs={"demo": 1}))
    assert main(["selftest"]) == EXIT_OK
    assert "selftest passed" in capsys.readouterr().out

    failing = SelftestReport(runs={"demo": 1}, violations=[Violation("demo", 11, "broken")])
    monkeypatch.setattr(cli, "selftest", lambda config: failing)
    assert main(["selftest"]) == EXIT_SELFTEST
    assert "demo seed=11: broken" in capsys.readouterr().out


@pytest.mark.unit
def test_runtime_errors_exit_two(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    argv = ["sweep", "--n", "8", "--p", "16,32", "--trials", "1", "--out", str(blocker / "sub")]
    assert main(argv) == EXIT_RUNTIME
