"""
===============================================================================
MODULE: test_grid.py
===============================================================================

PURPOSE:
    Unit tests for frame plans and resource grid construction.

USAGE:
    pytest tests/unit/test_grid.py
===============================================================================
"""

import numpy as np
import pytest

from lte_baseband.grid import (
    DEFAULT_PILOT_SYMBOL,
    FramePlan,
    build_grid_column,
    build_resource_grid,
    validate_grid,
)
from lte_baseband.params import derive_ofdm_params
from utils.exceptions import BlockInputError


@pytest.fixture
def params_5mhz():
    return derive_ofdm_params(5)


def test_empty_column_with_pilot(params_5mhz):
    """Test 0 data symbols in a pilot column: pilots only."""
    grid = build_resource_grid([], params_5mhz, FramePlan(), n_symbols=1)

    assert grid.cells.shape == (300, 1)
    assert grid.pilot_mask.all()
    np.testing.assert_array_equal(grid.cells[:, 0], DEFAULT_PILOT_SYMBOL)


def test_empty_column_without_pilot(params_5mhz):
    grid = build_resource_grid([], params_5mhz, FramePlan.no_pilots(), n_symbols=1)

    assert not grid.cells.any()
    assert grid.underrun == 300


def test_full_data_column(params_5mhz):
    """Test 300 symbols fill a 5 MHz column exactly."""
    symbols = np.arange(1, 301) * (1 + 1j)

    grid = build_resource_grid(symbols, params_5mhz, FramePlan.no_pilots())

    assert grid.n_symbols == 1
    np.testing.assert_array_equal(grid.column(0), symbols)
    assert validate_grid(grid) == (True, None)


def test_pilot_count_in_one_slot(params_5mhz):
    """Test one pilot per ten data symbols: a 7-symbol slot has one pilot column."""
    plan = FramePlan()
    grid = build_resource_grid(np.ones(300 * 6), params_5mhz, plan, n_symbols=7)

    pilot_columns = int(grid.pilot_mask.all(axis=0).sum())

    assert pilot_columns == plan.pilot_count(7) == 1
    assert grid.pilot_mask[:, 0].all()


def test_fill_order_is_subcarrier_major(params_5mhz):
    symbols = np.arange(600, dtype=complex)

    grid = build_resource_grid(symbols, params_5mhz, FramePlan(pilot_period=3, pilot_offset=0))

    # column 0 is a pilot, data starts in column 1
    assert grid.n_symbols == 3
    np.testing.assert_array_equal(grid.column(1), symbols[:300])
    np.testing.assert_array_equal(grid.column(2), symbols[300:])


def test_unallocated_cells_are_zero(params_5mhz):
    plan = FramePlan.no_pilots(allocated_rbs=10)

    grid = build_resource_grid(np.ones(120), params_5mhz, plan)

    assert np.all(grid.cells[:120, 0] == 1)
    assert not grid.cells[120:, 0].any()


def test_underrun_is_flagged_not_raised(params_5mhz):
    grid = build_resource_grid(np.ones(250), params_5mhz, FramePlan.no_pilots(), n_symbols=1)

    is_valid, message = validate_grid(grid)

    assert grid.underrun == 50
    assert not is_valid
    assert "50" in message


def test_overflow_raises(params_5mhz):
    with pytest.raises(BlockInputError):
        build_resource_grid(np.ones(301), params_5mhz, FramePlan.no_pilots(), n_symbols=1)
    with pytest.raises(BlockInputError):
        build_grid_column(np.ones(301), params_5mhz, FramePlan.no_pilots(), 0)


def test_allocation_larger_than_band(params_5mhz):
    with pytest.raises(BlockInputError):
        FramePlan(allocated_rbs=26).allocated_subcarriers(params_5mhz)


@pytest.mark.parametrize("kwargs", [{"pilot_period": 0}, {"pilot_period": 5, "pilot_offset": 5}, {"allocated_rbs": -1}])
def test_invalid_plans(kwargs):
    with pytest.raises(BlockInputError):
        FramePlan(**kwargs)


def test_zero_period_means_no_pilots():
    assert FramePlan.from_pilot_period(0).pilot_period is None
    assert not FramePlan.from_pilot_period(None).is_pilot(0)


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
