"""
Tests for Basis Pursuit, w^I, the minimum-l2 interpolator and min-MSE.
"""

import numpy as np
import pytest

from config.solver_config import SolverConfig
from src.models.errors import FeasibilityError, RankDeficient, RegimeViolation
from src.solvers import interpolators
from src.solvers.interpolators import (
    basis_pursuit,
    dual_value_wI,
    l1_interpolation_lp,
    min_l2_overfit,
    min_mse,
    noise_interpolator,
    row_space_factor,
)
from src.solvers.linear_program import certificate_ok


@pytest.mark.unit
def test_basis_pursuit_interpolates_sparsely(small_instance, solver_config):
    ts = small_instance
    bp = basis_pursuit(ts, solver_config)

    assert np.allclose(ts.X @ bp.estimate, ts.observations, atol=1e-7)
    assert bp.nonzero_count <= ts.n
    assert np.abs(bp.estimate).sum() <= bp.solver.objective_value + 1e-9
    assert certificate_ok(bp.solver, l1_interpolation_lp(ts.X, ts.observations), solver_config)
    w = bp.estimate - ts.truth.beta_scaled
    assert bp.model_error_l2 == pytest.approx(np.linalg.norm(w))
    assert bp.model_error_l1 == pytest.approx(np.abs(w).sum())


@pytest.mark.unit
def test_basis_pursuit_recovers_noiseless_sparse_signal(make_instance, solver_config):
    """With no noise and s = 1, l1 minimization recovers beta exactly at moderate p."""
    ts = make_instance(n=20, p=60, s=1, noise=0.0)
    bp = basis_pursuit(ts, solver_config)
    assert bp.model_error_l2 == pytest.approx(0.0, abs=1e-8)


@pytest.mark.unit
def test_basis_pursuit_requires_p_at_least_n(make_instance, solver_config):
    with pytest.raises(RegimeViolation):
        basis_pursuit(make_instance(n=10, p=8), solver_config)


@pytest.mark.unit
def test_noise_interpolator_fixes_support_to_zero(small_instance, solver_config):
    ts = small_instance
    wI = noise_interpolator(ts, solver_config)

    assert not np.any(wI.estimate[: ts.s])
    assert np.allclose(ts.X @ wI.estimate, ts.noise.values, atol=1e-7)
    assert wI.model_error_l1 == pytest.approx(np.abs(wI.estimate).sum())


@pytest.mark.unit
def test_support_counts_ignore_roundoff(small_instance, solver_config, monkeypatch):
    """Entries at or below zero_tol do not count toward the support of BP or w^I."""
    exact_solve = interpolators.solve_min_l1

    def solve_with_roundoff(A, target, config):
        alpha, result = exact_solve(A, target, config)
        alpha = np.where(alpha == 0.0, 0.5 * config.zero_tol, alpha)
        return alpha, result

    monkeypatch.setattr(interpolators, "solve_min_l1", solve_with_roundoff)
    ts = small_instance
    bp = basis_pursuit(ts, solver_config)
    wI = noise_interpolator(ts, solver_config)

    assert bp.nonzero_count <= ts.n
    assert wI.nonzero_count <= ts.n
    assert wI.nonzero_count == np.count_nonzero(np.abs(wI.estimate) > solver_config.zero_tol)
    assert np.count_nonzero(wI.estimate) > wI.nonzero_count


@pytest.mark.unit
def test_noise_interpolator_strong_duality(small_instance, solver_config):
    """lambda^T(-eps) equals ||w^I||_1 and lambda is dual feasible."""
    ts = small_instance
    wI = noise_interpolator(ts, solver_config)
    dual = dual_value_wI(ts, wI.multipliers, solver_config)
    assert dual == pytest.approx(wI.model_error_l1, rel=1e-7)


@pytest.mark.unit
def test_dual_value_rejects_infeasible_multipliers(small_instance, solver_config):
    ts = small_instance
    multipliers = 10.0 * ts.X[:, ts.s]
    with pytest.raises(FeasibilityError) as info:
        dual_value_wI(ts, multipliers, solver_config)
    assert info.value.violation > 1.0
    assert info.value.index >= ts.s


@pytest.mark.unit
def test_noise_interpolator_regime(make_instance, solver_config):
    with pytest.raises(RegimeViolation):
        noise_interpolator(make_instance(n=10, p=11, s=2), solver_config)


@pytest.mark.unit
def test_bp_error_never_exceeds_triangle_bound(small_instance, solver_config):
    """||beta_hat||_1 <= ||beta||_1 + ||w^I||_1, since beta + w^I is feasible."""
    ts = small_instance
    bp = basis_pursuit(ts, solver_config)
    wI = noise_interpolator(ts, solver_config)
    bound = np.abs(ts.truth.beta_scaled).sum() + wI.model_error_l1
    assert np.abs(bp.estimate).sum() <= bound + 1e-8


@pytest.mark.unit
def test_min_l2_matches_pseudo_inverse(small_instance, solver_config):
    ts = small_instance
    out = min_l2_overfit(ts, solver_config)
    expected = np.linalg.pinv(ts.X) @ ts.observations

    assert np.allclose(out.estimate, expected, atol=1e-10)
    assert np.allclose(ts.X @ out.estimate, ts.observations, atol=1e-10)
    assert out.solver is None


@pytest.mark.unit
def test_min_l2_has_smaller_l2_norm_than_bp(small_instance, solver_config):
    ts = small_instance
    l2 = min_l2_overfit(ts, solver_config).estimate
    bp = basis_pursuit(ts, solver_config).estimate
    assert np.linalg.norm(l2) <= np.linalg.norm(bp) + 1e-12


@pytest.mark.unit
def test_min_mse_below_threshold(make_instance, solver_config):
    ts = make_instance(n=30, p=10, s=1)
    out = min_mse(ts, solver_config)
    expected = np.linalg.lstsq(ts.X, ts.observations, rcond=None)[0]
    assert np.allclose(out.estimate, expected)


@pytest.mark.unit
def test_min_mse_rejects_overparameterized(small_instance, solver_config):
    with pytest.raises(RegimeViolation):
        min_mse(small_instance, solver_config)


@pytest.mark.unit
def test_at_threshold_all_interpolators_agree(make_instance, solver_config):
    """At p = n the interpolant is unique."""
    ts = make_instance(n=8, p=8, s=1)
    bp = basis_pursuit(ts, solver_config).estimate
    l2 = min_l2_overfit(ts, solver_config).estimate
    mse = min_mse(ts, solver_config).estimate
    assert np.allclose(bp, l2, atol=1e-7)
    assert np.allclose(l2, mse, atol=1e-9)


@pytest.mark.unit
def test_row_space_factor_detects_rank_deficiency():
    X = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
    with pytest.raises(RankDeficient):
        row_space_factor(X, SolverConfig())
    with pytest.raises(RankDeficient):
        row_space_factor(np.eye(3)[:, :2], SolverConfig())


@pytest.mark.unit
def test_unscaled_error_is_within_factor_two(make_instance, solver_config):
    """Column norms concentrate near sqrt(n), so the rescaling changes the error modestly."""
    ts = make_instance(n=200, p=400, s=1, noise=0.01)
    bp = basis_pursuit(ts, solver_config)
    ratio = bp.model_error_l2_unscaled / bp.model_error_l2
    assert 1.0 / np.sqrt(2.0) <= ratio <= np.sqrt(2.0)
