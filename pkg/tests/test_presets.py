"""
Tests for the named figure presets.
"""

import logging

import pytest

from src.bounds.catalog import BOUND_IDS
from src.models.errors import UnknownPreset
from src.pipelines.presets import PRESETS, figure_preset, p_grid
from src.pipelines.sweep_pipeline import quantity_names


@pytest.mark.unit
def test_p_grid_is_sorted_unique_and_log_spaced():
    grid = p_grid(20, 20_000, 20)
    assert grid[0] == 20
    assert grid[-1] == 20_000
    assert list(grid) == sorted(set(grid))
    assert p_grid(1, 3, 10) == (1, 2, 3)


@pytest.mark.unit
def test_incoherence_preset_sample_sizes():
    assert figure_preset("fig_M").n_values == (300, 1200)


@pytest.mark.unit
def test_noise_preset_levels():
    spec = figure_preset("fig_change_noise")
    assert [curve.noise_level for curve in spec.curves] == [0.01, 0.04, 0.16]
    assert spec.n_values == (100,)


@pytest.mark.unit
def test_unknown_preset_lists_valid_names():
    with pytest.raises(UnknownPreset, match="fig_wI"):
        figure_preset("nope")


@pytest.mark.unit
@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_is_complete(name):
    spec = figure_preset(name, base_seed=9)
    assert spec.figure_preset == name
    assert spec.base_seed == 9
    assert set(spec.bounds) <= set(BOUND_IDS)
    names = set(quantity_names(spec))
    for quantity in spec.plot_quantities:
        assert quantity in names, quantity


@pytest.mark.unit
def test_wI_preset_plots_five_curves():
    spec = figure_preset("fig_wI")
    assert spec.n_values == (20,)
    assert len(spec.plot_quantities) == 5
    assert spec.curves[0].noise_level == 0.01


@pytest.mark.unit
def test_validate_n_preset_uses_n_axis():
    spec = figure_preset("fig_validate_n")
    assert spec.plot_axis == "n"
    assert spec.p_values == (5000,)
    assert spec.report_n_scaled
    assert not spec.plot_log_y


@pytest.mark.unit
def test_desk_scale_notes_are_logged(caplog):
    with caplog.at_level(logging.WARNING, logger="src.pipelines.presets"):
        figure_preset("fig_compare")
    assert "desk scale" in caplog.text
