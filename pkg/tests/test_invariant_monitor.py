"""
Tests for the selftest invariant suite.
"""

import pytest

from src.models.errors import NumericalBreakdown
from src.monitoring import invariant_monitor
from src.monitoring.invariant_monitor import SELFTEST_SEEDS, InvariantMonitor, selftest

CHECKS = [
    "oracle_equivalence",
    "lp_certificates",
    "strong_duality_wI",
    "wI_bound_chain",
    "bp_l2_dominance",
    "nested_wI_monotone",
]


@pytest.mark.integration
def test_default_selftest_passes(solver_config):
    report = selftest(solver_config)

    assert report.passed, report.render()
    assert list(report.runs) == CHECKS
    assert all(count == len(SELFTEST_SEEDS) for count in report.runs.values())
    assert report.render().endswith("selftest passed")


@pytest.mark.integration
def test_render_is_identical_across_runs(solver_config):
    first = InvariantMonitor(solver_config, seeds=(11, 23)).run().render()
    second = InvariantMonitor(solver_config, seeds=(11, 23)).run().render()
    assert first == second


@pytest.mark.unit
def test_oracle_mismatch_names_check_and_seed(solver_config, monkeypatch):
    monkeypatch.setattr(invariant_monitor, "brute_force_l1", lambda X, y: 1e6)
    monitor = InvariantMonitor(solver_config, seeds=(11,))

    report = monitor.run()

    assert not report.passed
    assert [v.check for v in report.violations] == ["oracle_equivalence"]
    assert report.violations[0].seed == 11
    text = report.render()
    assert "oracle_equivalence: 1 instance(s), 1 violation(s) [FAILED]" in text
    assert "  oracle_equivalence seed=11: BP objective" in text
    assert text.endswith("selftest failed")


@pytest.mark.unit
def test_raised_errors_become_violations(solver_config, monkeypatch):
    def broken(*args, **kwargs):
        raise NumericalBreakdown("forced")

    monkeypatch.setattr(invariant_monitor, "noise_interpolator", broken)
    report = InvariantMonitor(solver_config, seeds=(23,)).run()

    failed = {v.check for v in report.violations}
    assert failed == {"lp_certificates", "strong_duality_wI", "wI_bound_chain", "nested_wI_monotone"}
    assert all("raised NumericalBreakdown: forced" in v.description for v in report.violations)


@pytest.mark.unit
def test_publish_metrics_counts(solver_config, monkeypatch):
    monkeypatch.setattr(invariant_monitor, "brute_force_l1", lambda X, y: -1.0)
    monitor = InvariantMonitor(solver_config, seeds=(11, 37))
    metrics = monitor.publish_metrics(monitor.run())
    assert metrics == {"checks": 6, "instances": 12, "violations": 2}
