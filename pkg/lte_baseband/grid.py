"""
===============================================================================
MODULE: grid.py
===============================================================================

PURPOSE:
    Resource grid construction for the shared data channel: data symbols
    fill the allocated subcarriers of data columns, pilot columns carry a
    fixed constellation point on every used subcarrier, everything else is
    exactly zero.

USAGE EXAMPLES:
    from lte_baseband.grid import FramePlan, build_resource_grid

    plan = FramePlan()                            # 1 pilot every 10 data symbols
    grid = build_resource_grid(symbols, params, plan, n_symbols=14)
    grid.cells.shape                              # (used_subcarriers, 14)

FRAME PLAN:
    - OFDM symbol s is a pilot column when s % pilot_period == pilot_offset
    - pilot_period=None disables pilots
    - allocated_rbs limits data to the first 12 * allocated_rbs subcarriers
    - Data fill order: down the subcarriers of a column, then the next column

WHAT THIS MODULE DOES:
    1. Decides pilot/data per OFDM symbol (FramePlan)
    2. Builds single columns (simulated chain) and whole grids
    3. Flags under-run (fewer data symbols than data cells) via
       validate_grid, never raising
===============================================================================
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from lte_baseband.params import SUBCARRIERS_PER_RB, OfdmParams
from utils.exceptions import BlockInputError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

DEFAULT_PILOT_PERIOD = 11
DEFAULT_PILOT_SYMBOL = complex((1 + 1j) / math.sqrt(2))


@dataclass(frozen=True)
class FramePlan:
    pilot_period: Optional[int] = DEFAULT_PILOT_PERIOD
    pilot_offset: int = 0
    allocated_rbs: Optional[int] = None
    pilot_symbol: complex = DEFAULT_PILOT_SYMBOL

    def __post_init__(self) -> None:
        if self.pilot_period is not None:
            if self.pilot_period < 1:
                raise BlockInputError(f"pilot_period must be >= 1, got {self.pilot_period}")
            if not 0 <= self.pilot_offset < self.pilot_period:
                raise BlockInputError(
                    f"pilot_offset must be in [0, {self.pilot_period}), got {self.pilot_offset}"
                )
        if self.allocated_rbs is not None and self.allocated_rbs < 0:
            raise BlockInputError(f"allocated_rbs must be >= 0, got {self.allocated_rbs}")

    @classmethod
    def no_pilots(cls, allocated_rbs: Optional[int] = None) -> "FramePlan":
        return cls(pilot_period=None, allocated_rbs=allocated_rbs)

    @classmethod
    def from_pilot_period(cls, pilot_period: Optional[int], **kwargs) -> "FramePlan":
        """pilot_period of 0 or None means no pilots."""
        return cls(pilot_period=pilot_period or None, **kwargs)

    def is_pilot(self, symbol_index: int) -> bool:
        return self.pilot_period is not None and symbol_index % self.pilot_period == self.pilot_offset

    def pilot_count(self, n_symbols: int) -> int:
        return sum(1 for s in range(n_symbols) if self.is_pilot(s))

    def allocated_subcarriers(self, params: OfdmParams) -> int:
        if self.allocated_rbs is None:
            return params.used_subcarriers
        count = SUBCARRIERS_PER_RB * self.allocated_rbs
        if count > params.used_subcarriers:
            raise BlockInputError(
                f"allocated_rbs={self.allocated_rbs} exceeds the {params.used_subcarriers} used subcarriers"
            )
        return count


@dataclass(frozen=True, eq=False)
class ResourceGrid:
    cells: np.ndarray
    pilot_mask: np.ndarray
    underrun: int = 0

    @property
    def n_symbols(self) -> int:
        return self.cells.shape[1]

    def column(self, symbol_index: int) -> np.ndarray:
        return self.cells[:, symbol_index]


def build_grid_column(
    symbols,
    params: OfdmParams,
    plan: FramePlan,
    symbol_index: int
) -> Tuple[np.ndarray, bool, int]:
    """
    One grid column.

    RETURNS:
        (column, is_pilot, underrun): the column of used_subcarriers cells,
        whether it is a pilot column, and how many data cells were zero-padded

    RAISES:
        BlockInputError: more data symbols than the column holds
    """
    column = np.zeros(params.used_subcarriers, dtype=np.complex128)
    if plan.is_pilot(symbol_index):
        column[:] = plan.pilot_symbol
        return column, True, 0

    data = np.asarray(symbols if symbols is not None else (), dtype=np.complex128).ravel()
    capacity = plan.allocated_subcarriers(params)
    if data.size > capacity:
        raise BlockInputError(
            f"Symbol {symbol_index}: {data.size} data symbols for {capacity} allocated subcarriers"
        )
    column[:data.size] = data
    return column, False, capacity - data.size


def _columns_needed(n_data: int, per_column: int, plan: FramePlan) -> int:
    if n_data == 0:
        return 1
    if per_column == 0 or plan.pilot_period == 1:
        raise BlockInputError("Frame plan has no data cells")
    n_symbols = placed = 0
    while placed < n_data:
        if not plan.is_pilot(n_symbols):
            placed += per_column
        n_symbols += 1
    return n_symbols


def build_resource_grid(
    symbols,
    params: OfdmParams,
    plan: FramePlan,
    n_symbols: Optional[int] = None
) -> ResourceGrid:
    """
    Place a data-symbol stream onto a grid of n_symbols OFDM symbols.

    n_symbols defaults to the smallest grid that holds every data symbol.
    Missing data cells are zero-padded and counted in ResourceGrid.underrun.

    RAISES:
        BlockInputError: the stream does not fit in n_symbols columns
    """
    data = np.asarray(symbols if symbols is not None else (), dtype=np.complex128).ravel()
    per_column = plan.allocated_subcarriers(params)

    if n_symbols is None:
        n_symbols = _columns_needed(data.size, per_column, plan)

    cells = np.zeros((params.used_subcarriers, n_symbols), dtype=np.complex128)
    pilot_mask = np.zeros(cells.shape, dtype=bool)
    cursor = 0
    underrun = 0
    for s in range(n_symbols):
        take = 0 if plan.is_pilot(s) else min(per_column, data.size - cursor)
        column, is_pilot, missing = build_grid_column(data[cursor:cursor + take], params, plan, s)
        cells[:, s] = column
        pilot_mask[:, s] = is_pilot
        underrun += missing
        cursor += take

    if cursor < data.size:
        raise BlockInputError(
            f"{data.size - cursor} data symbols do not fit in {n_symbols} OFDM symbols"
        )
    grid = ResourceGrid(cells=cells, pilot_mask=pilot_mask, underrun=underrun)
    is_valid, message = validate_grid(grid)
    if not is_valid:
        logger.warning(f"⚠️  {message}")
    return grid


def validate_grid(grid: ResourceGrid) -> Tuple[bool, Optional[str]]:
    """
    Soft check for data under-run.

    RETURNS:
        Tuple[bool, Optional[str]]: (is_valid, warning_message)
    """
    if grid.underrun:
        return False, f"Resource grid under-run: {grid.underrun} data cells zero-padded"
    return True, None
