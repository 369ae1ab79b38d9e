"""
Pytest configuration and shared fixtures for the double-descent toolkit tests.
"""

import numpy as np
import pytest

from config.solver_config import SolverConfig
from src.generation.model_gen import generate_training_set
from src.generation.rng import trial_stream
from src.models.data_models import CurveSpec, NoiseMode, SweepSpec


@pytest.fixture
def solver_config():
    """Default tolerances, independent of the environment."""
    return SolverConfig()


@pytest.fixture
def make_instance():
    """Factory for small reproducible training sets."""

    def _make(n=10, p=40, s=1, beta_norm=1.0, noise=0.1, seed=7, trial=0, mode=NoiseMode.EXACT_NORM):
        stream = trial_stream(seed, "tests", 0, 0, trial)
        return generate_training_set(n, p, s, beta_norm, noise, stream, mode)

    return _make


@pytest.fixture
def small_instance(make_instance):
    """n=10, p=40, s=2 instance with ||eps||_2 = 0.1."""
    return make_instance(n=10, p=40, s=2)


@pytest.fixture
def tiny_sweep_spec():
    """Two-point sweep over p with BP, w^I and a few bounds."""
    return SweepSpec(
        n_values=(8,),
        p_values=(20, 40),
        curves=(CurveSpec("s=1", s=1, beta_norm=1.0, noise_level=0.05),),
        trials=3,
        base_seed=5,
        estimators=("bp", "wI"),
        bounds=("prop2_ub_wBP2", "emp_lb_wI1_B1"),
    )


@pytest.fixture
def random_matrix():
    """Factory for Gaussian matrices from a fixed seed."""

    def _make(n, p, seed=0):
        return np.random.default_rng(seed).standard_normal((n, p))

    return _make
