"""
Quantitative reproduction checks at reduced trial counts.

These run full sweeps and take minutes; select them with `-m slow`.
"""

import dataclasses
import math

import numpy as np
import pytest

from src.bounds.catalog import eval_bound
from src.bounds.incoherence import empirical_ub_wI1_lp, incoherence, k_factor, sorted_noise_correlations
from src.generation.rng import make_generator
from src.pipelines.presets import figure_preset, p_grid
from src.pipelines.sweep_pipeline import extract_minima, sweep, table_to_frame
from src.solvers.interpolators import basis_pursuit, l1_interpolation_lp, noise_interpolator
from src.solvers.linear_program import certificate_ok


@pytest.mark.slow
def test_incoherence_halves_when_n_quadruples(solver_config):
    spec = dataclasses.replace(figure_preset("fig_M", base_seed=3), trials=5, p_values=(1_000, 3_000, 10_000))
    table = sweep(spec, solver_config)

    def mean_m(n):
        return np.mean([stats.quantities["M"].mean for stats in table if stats.n == n])

    assert 1.6 <= mean_m(300) / mean_m(1200) <= 2.4
    within = [stats.quantities["M"].mean <= stats.quantities["prop5_ub_M"].mean for stats in table]
    assert sum(within) >= 0.9 * len(within)


@pytest.mark.slow
def test_bp_minimum_scales_with_noise(solver_config):
    spec = dataclasses.replace(
        figure_preset("fig_change_noise", base_seed=1), trials=10, p_values=p_grid(200, 20_000, 10)
    )
    minima = extract_minima(sweep(spec, solver_config), "bp_l2")

    low = minima["eps=0.01"][1]
    assert 0.0025 <= low <= 0.010
    assert 4 / 1.6 <= minima["eps=0.04"][1] / low <= 4 * 1.6
    assert 4 / 1.6 <= minima["eps=0.16"][1] / minima["eps=0.04"][1] <= 4 * 1.6


@pytest.mark.slow
def test_bp_lower_bounds_hold_with_high_frequency(make_instance, solver_config):
    n, p, instances = 100, 1000, 200
    l2_hits = l1_hits = 0
    for trial in range(instances):
        ts = make_instance(n=n, p=p, s=1, noise=0.01, seed=202, trial=trial)
        bp = basis_pursuit(ts, solver_config)
        params = {"n": n, "p": p, "s": 1, "noise_norm": ts.noise_norm}
        l2_hits += bp.model_error_l2 >= eval_bound("lb_wBP2", params).value
        l1_hits += bp.model_error_l1 >= eval_bound("lb_wBP1", params).value

    assert l2_hits >= 0.95 * instances
    assert l1_hits >= 0.95 * instances


@pytest.mark.slow
def test_certificates_over_many_small_instances(make_instance, solver_config):
    sizes = make_generator(17)
    for trial in range(200):
        n = int(sizes.integers(2, 51))
        p = int(sizes.integers(n + 1, 501))
        ts = make_instance(n=n, p=p, s=1, noise=0.01, seed=303, trial=trial)

        bp = basis_pursuit(ts, solver_config)
        assert certificate_ok(bp.solver, l1_interpolation_lp(ts.X, ts.observations), solver_config)
        assert bp.nonzero_count <= n
        assert np.abs(bp.estimate).sum() <= bp.solver.objective_value + 1e-9 * (1 + bp.solver.objective_value)

        wI = noise_interpolator(ts, solver_config)
        assert certificate_ok(wI.solver, l1_interpolation_lp(ts.X[:, ts.s:], ts.noise.values), solver_config)
        assert wI.nonzero_count <= n


@pytest.mark.slow
def test_wI_chain_over_many_instances(make_instance, solver_config):
    grid = p_grid(100, 5_000, 10)
    instances = 200
    b5n_checked = b5n_violations = 0
    for trial in range(instances):
        ts = make_instance(n=20, p=grid[trial % len(grid)], s=1, noise=0.01, seed=101, trial=trial)
        wI_l1 = noise_interpolator(ts, solver_config).model_error_l1
        order = sorted_noise_correlations(ts, min(5 * ts.n, ts.p - ts.s))
        lower = eval_bound("emp_lb_wI1_B1", {"noise_norm": ts.noise_norm, "b1": order.inner_products[0]}).value
        upper = empirical_ub_wI1_lp(order, ts.noise.values, solver_config)

        assert ts.noise_norm <= lower * (1 + 1e-9)
        assert lower <= wI_l1 * (1 + 1e-9)
        assert math.isinf(upper) or wI_l1 <= upper * (1 + 1e-9)

        if 5 * ts.n <= ts.p - ts.s:
            b5n = order.inner_products[5 * ts.n - 1]
            b5n_checked += 1
            b5n_violations += wI_l1 > eval_bound("emp_ub_wI1_B5n", {"noise_norm": ts.noise_norm, "b5n": b5n}).value

    assert b5n_checked >= 0.8 * instances
    assert b5n_violations < 0.1 * b5n_checked


@pytest.mark.slow
def test_bp_dominated_by_closed_form_bounds_when_k_positive(make_instance, solver_config):
    n, p = 600, 640
    positive = 0
    for trial in range(200):
        s = 1 + trial % 2
        ts = make_instance(n=n, p=p, s=s, noise=0.01, seed=404, trial=trial)
        M = incoherence(ts.design, solver_config)
        K = k_factor(M, s)
        if K <= 0:
            continue
        positive += 1
        bp = basis_pursuit(ts, solver_config)
        wI_l1 = noise_interpolator(ts, solver_config).model_error_l1
        shared = {"K": K, "M": M, "wI_l1": wI_l1, "noise_norm": ts.noise_norm}

        assert bp.model_error_l1 <= eval_bound("prop1_ub_wBP1", shared).value * (1 + 1e-9)
        assert bp.model_error_l2 <= eval_bound("cor3_ub_wBP2", shared).value * (1 + 1e-9)
        prop2 = eval_bound("prop2_ub_wBP2", {"noise_norm": ts.noise_norm, "M": M, "wBP_l1": bp.model_error_l1})
        assert bp.model_error_l2 <= prop2.value * (1 + 1e-9)

    assert positive > 0


@pytest.mark.slow
def test_scaled_bp_error_plateaus_in_n(solver_config):
    spec = dataclasses.replace(figure_preset("fig_validate_n", base_seed=5), trials=4)
    table = sweep(spec, solver_config)

    plateaus = {}
    for curve in spec.curves:
        levels = np.array([stats.quantities["bp_l2_n4"].median for stats in table if stats.curve == curve.label])
        assert (levels.max() - levels.min()) / levels.mean() <= 0.25
        plateaus[curve.label] = levels.mean()

    assert 3.0 <= plateaus["s=20 eps=0.6"] / plateaus["s=20 eps=0.15"] <= 5.0


@pytest.mark.slow
def test_bp_and_min_l2_minima_follow_signal_strength(solver_config):
    spec = dataclasses.replace(figure_preset("fig_compare", base_seed=6), trials=10, p_values=p_grid(120, 10_000, 8))
    table = sweep(spec, solver_config)
    bp = extract_minima(table, "bp_l2")
    frame = table_to_frame(table)
    min_l2 = extract_minima(frame[frame["p"] > frame["n"]], "min_l2_l2")

    strong, weak = bp["s=100 beta=1"][1], bp["s=100 beta=0.1"][1]
    assert abs(strong - weak) <= 0.3 * max(strong, weak)
    assert min_l2["s=100 beta=1"][1] >= 2 * min_l2["s=100 beta=0.1"][1]
    assert 5 * bp["s=1 beta=1"][1] <= min_l2["s=1 beta=1"][1]

    for stats in table:
        expected = stats.quantities["l2_expected_sq_error"].mean
        if stats.p >= 2 * stats.n and np.isfinite(expected):
            assert stats.quantities["min_l2_l2sq_unscaled"].mean == pytest.approx(expected, rel=0.1)
