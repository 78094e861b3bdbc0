"""
===============================================================================
MODULE: params.py
===============================================================================

PURPOSE:
    LTE downlink OFDM numerology: the bandwidth table (bandwidth, IFFT size,
    used subcarriers, resource blocks), cyclic-prefix lengths and the
    sample counts derived from them.

USAGE EXAMPLES:
    from lte_baseband.params import derive_ofdm_params, params_for_fft_size

    params = derive_ofdm_params(10)          # fft 1024, 600 subcarriers
    params = params_for_fft_size(2048, cp_mode="extended")
    params.cp_length(0)                       # 512

NOTES:
    - Subcarrier spacing is 15 kHz, so the sampling rate is fft_size x 15 kHz
    - Normal CP: 160*N/2048 samples for the first symbol of a slot, 144*N/2048
      for the other six; extended CP: 512*N/2048 for all six symbols
    - The 3 MHz row lists 12 resource blocks next to 180 used subcarriers;
      the row is kept as published and subcarrier counts drive all sizing
===============================================================================
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

from utils.exceptions import BlockInputError

SUBCARRIER_SPACING_KHZ = 15
SUBCARRIERS_PER_RB = 12
CP_MODES = ("normal", "extended")

# (bandwidth_mhz, fft_size, used_subcarriers, resource_blocks)
LTE_BANDWIDTH_TABLE: Tuple[Tuple[float, int, int, int], ...] = (
    (1.4, 128, 72, 6),
    (3.0, 256, 180, 12),
    (5.0, 512, 300, 25),
    (10.0, 1024, 600, 50),
    (15.0, 1536, 900, 75),
    (20.0, 2048, 1200, 100),
)

SUPPORTED_FFT_SIZES = tuple(row[1] for row in LTE_BANDWIDTH_TABLE)
SUPPORTED_BANDWIDTHS_MHZ = tuple(row[0] for row in LTE_BANDWIDTH_TABLE)


@dataclass(frozen=True)
class OfdmParams:
    bandwidth_mhz: float
    fft_size: int
    used_subcarriers: int
    resource_blocks: int
    cp_mode: str = "normal"
    subcarrier_spacing_khz: int = SUBCARRIER_SPACING_KHZ

    def __post_init__(self) -> None:
        if self.cp_mode not in CP_MODES:
            raise BlockInputError(f"cp_mode must be one of {CP_MODES}, got {self.cp_mode!r}")

    @property
    def sampling_rate_hz(self) -> int:
        return self.fft_size * self.subcarrier_spacing_khz * 1000

    @property
    def bandwidth_hz(self) -> float:
        return self.bandwidth_mhz * 1e6

    @property
    def symbols_per_slot(self) -> int:
        return symbols_per_slot(self.cp_mode)

    @property
    def symbols_per_subframe(self) -> int:
        return 2 * self.symbols_per_slot

    def cp_length(self, symbol_index_in_slot: int) -> int:
        return cp_length(self, symbol_index_in_slot)

    def cp_lengths(self) -> Tuple[int, ...]:
        """CP length of every symbol of one slot."""
        return tuple(self.cp_length(i) for i in range(self.symbols_per_slot))

    @property
    def max_cp_length(self) -> int:
        return max(self.cp_lengths())

    @property
    def slot_sample_count(self) -> int:
        return slot_sample_count(self)

    @property
    def subframe_sample_count(self) -> int:
        return 2 * self.slot_sample_count

    def symbol_sample_offset(self, symbol_index: int) -> int:
        """First sample of a frame-relative OFDM symbol, counted from sample 0."""
        slot, index = divmod(symbol_index, self.symbols_per_slot)
        lengths = self.cp_lengths()
        within = sum(self.fft_size + lengths[i] for i in range(index))
        return slot * self.slot_sample_count + within


def symbols_per_slot(cp_mode: str) -> int:
    if cp_mode not in CP_MODES:
        raise BlockInputError(f"cp_mode must be one of {CP_MODES}, got {cp_mode!r}")
    return 7 if cp_mode == "normal" else 6


def cp_length(params: OfdmParams, symbol_index_in_slot: int) -> int:
    """Cyclic prefix length in samples."""
    if not 0 <= symbol_index_in_slot < params.symbols_per_slot:
        raise BlockInputError(
            f"symbol_index_in_slot must be in [0, {params.symbols_per_slot}), got {symbol_index_in_slot}"
        )
    n = params.fft_size
    if params.cp_mode == "extended":
        return 512 * n // 2048
    return (160 if symbol_index_in_slot == 0 else 144) * n // 2048


def slot_sample_count(params: OfdmParams) -> int:
    return sum(params.fft_size + cp for cp in params.cp_lengths())


def _row_for_bandwidth(bandwidth_mhz: float) -> Tuple[float, int, int, int]:
    for row in LTE_BANDWIDTH_TABLE:
        if math.isclose(row[0], float(bandwidth_mhz), abs_tol=1e-9):
            return row
    raise BlockInputError(
        f"Unsupported LTE bandwidth {bandwidth_mhz} MHz (supported: {', '.join(map(str, SUPPORTED_BANDWIDTHS_MHZ))})"
    )


def _row_for_fft_size(fft_size: int) -> Tuple[float, int, int, int]:
    for row in LTE_BANDWIDTH_TABLE:
        if row[1] == int(fft_size):
            return row
    raise BlockInputError(
        f"Unsupported FFT size {fft_size} (supported: {', '.join(map(str, SUPPORTED_FFT_SIZES))})"
    )


def derive_ofdm_params(bandwidth_mhz: Union[int, float], cp_mode: str = "normal") -> OfdmParams:
    """
    Table row for a channel bandwidth.

    RAISES:
        BlockInputError: bandwidth not in {1.4, 3, 5, 10, 15, 20} MHz
    """
    bw, fft, used, rbs = _row_for_bandwidth(bandwidth_mhz)
    return OfdmParams(bw, fft, used, rbs, cp_mode=cp_mode)


def params_for_fft_size(fft_size: int, cp_mode: str = "normal") -> OfdmParams:
    bw, fft, used, rbs = _row_for_fft_size(fft_size)
    return OfdmParams(bw, fft, used, rbs, cp_mode=cp_mode)


def bandwidth_for_fft_size(fft_size: int) -> float:
    return _row_for_fft_size(fft_size)[0]


def fft_size_for_bandwidth(bandwidth_mhz: float) -> int:
    return _row_for_bandwidth(bandwidth_mhz)[1]
