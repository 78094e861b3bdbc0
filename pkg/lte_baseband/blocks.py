"""
===============================================================================
MODULE: blocks.py
===============================================================================

PURPOSE:
    Behavioral models of the LTE downlink transmitter IPs, wrapping the pure
    DSP functions so the simulation kernel can run them. One token carries
    one OFDM symbol's worth of data (SymbolToken).

BLOCKS:
    bit_source        - seeded information bits, one token per OFDM symbol,
                        released at the symbol's start cycle
    channel_coder     - rate-1/3 coder (key: code_block_size)
    qam_mapper        - QAM mapping (key: modulation, quantization_bits)
    alamouti_encoder  - 2-antenna STBC, ports ant0/ant1 (key: quantization_bits)
    grid_mapper       - grid column (key: fft_size, quantization_bits)
    ifft              - IFFT body (key: fft_size, quantization_bits)
    cp_inserter       - cyclic prefix (key: fft_size, cp_mode, quantization_bits)
    antenna_sink      - per-antenna sample monitor

PILOT SYMBOLS:
    Pilot tokens carry no bits. The coder, mapper and Alamouti blocks
    forward them inactive (zero latency, no activity interval); the grid
    mapper, IFFT and CP blocks process them like data.

INSTANCE PARAMETERS:
    fft_size (required), cp_mode, modulation, code_block_size,
    quantization_bits, clock_mhz, pilot_period, allocated_rbs,
    precision ("fixed" | "double"), block_floating, n_symbols (source only)
===============================================================================
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Type

import numpy as np

from lte_baseband.alamouti import alamouti_encode
from lte_baseband.coding import encode_padded
from lte_baseband.grid import DEFAULT_PILOT_PERIOD, FramePlan, build_grid_column
from lte_baseband.modulation import bits_per_symbol, canonical_modulation, map_qam
from lte_baseband.ofdm import add_cyclic_prefix, ifft_body, ifft_body_fixed
from lte_baseband.params import OfdmParams, params_for_fft_size
from lte_baseband.quantization import quantize
from sim_kernel.blocks import BlockBehavior, Firing, SinkBehavior, SourceBehavior
from utils.exceptions import BlockInputError, TopologyError

DEFAULT_MODULATION = "QPSK"
DEFAULT_CODE_BLOCK_SIZE = 1024
DEFAULT_QUANTIZATION_BITS = 14
DEFAULT_CLOCK_MHZ = 50.0


@dataclass(frozen=True, eq=False)
class SymbolToken:
    symbol_index: int
    payload: Optional[np.ndarray] = None
    pilot: bool = False
    saturated: int = 0


@dataclass(frozen=True)
class LteSettings:
    """Configuration shared by every block of one transmitter chain."""

    params: OfdmParams
    plan: FramePlan
    modulation: str
    code_block_size: int
    q_bits: int
    fixed_point: bool
    block_floating: bool
    clock_mhz: float

    @classmethod
    def from_parameters(cls, parameters: Mapping[str, Any]) -> "LteSettings":
        if "fft_size" not in parameters:
            raise TopologyError("LTE blocks need an fft_size parameter")
        precision = str(parameters.get("precision", "fixed"))
        if precision not in ("fixed", "double"):
            raise TopologyError(f"precision must be 'fixed' or 'double', got {precision!r}")
        params = params_for_fft_size(int(parameters["fft_size"]), str(parameters.get("cp_mode", "normal")))
        allocated = parameters.get("allocated_rbs")
        plan = FramePlan.from_pilot_period(
            parameters.get("pilot_period", DEFAULT_PILOT_PERIOD),
            allocated_rbs=int(allocated) if allocated is not None else None,
        )
        return cls(
            params=params,
            plan=plan,
            modulation=canonical_modulation(parameters.get("modulation", DEFAULT_MODULATION)),
            code_block_size=int(parameters.get("code_block_size", DEFAULT_CODE_BLOCK_SIZE)),
            q_bits=int(parameters.get("quantization_bits", DEFAULT_QUANTIZATION_BITS)),
            fixed_point=precision == "fixed",
            block_floating=bool(parameters.get("block_floating", False)),
            clock_mhz=float(parameters.get("clock_mhz", DEFAULT_CLOCK_MHZ)),
        )

    @property
    def allocated_subcarriers(self) -> int:
        return self.plan.allocated_subcarriers(self.params)

    @property
    def coded_bits_per_symbol(self) -> int:
        return self.allocated_subcarriers * bits_per_symbol(self.modulation)

    @property
    def info_bits_per_symbol(self) -> int:
        return self.coded_bits_per_symbol // 3

    def symbol_start_cycle(self, symbol_index: int) -> int:
        """Clock cycle at which an OFDM symbol starts on air."""
        clock_hz = round(self.clock_mhz * 1e6)
        return self.params.symbol_sample_offset(symbol_index) * clock_hz // self.params.sampling_rate_hz


class _LteBlock(BlockBehavior):
    def __init__(self, parameters: Optional[Mapping[str, Any]] = None, seed: int = 0):
        super().__init__(parameters, seed)
        self.settings = LteSettings.from_parameters(self.parameters)

    def _fixed(self, symbols: np.ndarray) -> Tuple[np.ndarray, int]:
        if not self.settings.fixed_point:
            return symbols, 0
        quantized = quantize(symbols, self.settings.q_bits)
        return quantized.values, quantized.saturated


class BitSource(SourceBehavior):
    block_type = "bit_source"

    def __init__(self, parameters: Optional[Mapping[str, Any]] = None, seed: int = 0):
        super().__init__(parameters, seed)
        self.settings = LteSettings.from_parameters(self.parameters)

    def schedule(self) -> Iterator[Tuple[int, Any]]:
        rng = np.random.default_rng(self.seed)
        limit = self.parameters.get("n_symbols")
        n_bits = self.settings.info_bits_per_symbol
        index = 0
        while limit is None or index < int(limit):
            cycle = self.settings.symbol_start_cycle(index)
            if self.settings.plan.is_pilot(index):
                yield cycle, SymbolToken(index, pilot=True)
            else:
                yield cycle, SymbolToken(index, rng.integers(0, 2, size=n_bits, dtype=np.uint8))
            index += 1


class ChannelCoder(_LteBlock):
    block_type = "channel_coder"
    key_parameters = ("code_block_size",)

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        token = inputs["in"]
        if token.pilot:
            return Firing({"out": [token]}, active=False)
        coded = encode_padded(token.payload, self.settings.code_block_size)
        return Firing({"out": [replace(token, payload=coded)]})


class QamMapper(_LteBlock):
    block_type = "qam_mapper"
    key_parameters = ("modulation", "quantization_bits")

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        token = inputs["in"]
        if token.pilot:
            return Firing({"out": [token]}, active=False)
        symbols, saturated = self._fixed(map_qam(token.payload, self.settings.modulation))
        return Firing({"out": [replace(token, payload=symbols, saturated=token.saturated + saturated)]})


class AlamoutiEncoder(_LteBlock):
    block_type = "alamouti_encoder"
    output_ports = ("ant0", "ant1")
    key_parameters = ("quantization_bits",)

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        token = inputs["in"]
        if token.pilot:
            return Firing({"ant0": [token], "ant1": [token]}, active=False)
        streams = alamouti_encode(token.payload)
        outputs = {}
        for port, stream in zip(self.output_ports, streams):
            values, saturated = self._fixed(stream)
            outputs[port] = [replace(token, payload=values, saturated=token.saturated + saturated)]
        return Firing(outputs)


class GridMapper(_LteBlock):
    block_type = "grid_mapper"
    key_parameters = ("fft_size", "quantization_bits")

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        token = inputs["in"]
        column, is_pilot, _ = build_grid_column(
            None if token.pilot else token.payload,
            self.settings.params,
            self.settings.plan,
            token.symbol_index,
        )
        return Firing({"out": [replace(token, payload=column, pilot=is_pilot)]})


class Ifft(_LteBlock):
    block_type = "ifft"
    key_parameters = ("fft_size", "quantization_bits")

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        token = inputs["in"]
        if not self.settings.fixed_point:
            body = ifft_body(token.payload, self.settings.params)
            return Firing({"out": [replace(token, payload=body)]})
        quantized, _ = ifft_body_fixed(
            token.payload, self.settings.params, self.settings.q_bits, self.settings.block_floating
        )
        return Firing({"out": [replace(token, payload=quantized.values, saturated=token.saturated + quantized.saturated)]})


class CpInserter(_LteBlock):
    block_type = "cp_inserter"
    key_parameters = ("fft_size", "cp_mode", "quantization_bits")

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        token = inputs["in"]
        params = self.settings.params
        cp_len = params.cp_length(token.symbol_index % params.symbols_per_slot)
        return Firing({"out": [replace(token, payload=add_cyclic_prefix(token.payload, cp_len))]})


class AntennaSink(SinkBehavior):
    block_type = "antenna_sink"


def concatenate_samples(tokens: Sequence[SymbolToken]) -> np.ndarray:
    """Time-domain sample stream of a sink, in symbol order."""
    if not tokens:
        return np.zeros(0, dtype=np.complex128)
    ordered = sorted(tokens, key=lambda token: token.symbol_index)
    for token in ordered:
        if token.payload is None:
            raise BlockInputError(f"Symbol {token.symbol_index} reached the sink without samples")
    return np.concatenate([token.payload for token in ordered])


LTE_BLOCKS: Tuple[Type[BlockBehavior], ...] = (
    BitSource,
    ChannelCoder,
    QamMapper,
    AlamoutiEncoder,
    GridMapper,
    Ifft,
    CpInserter,
    AntennaSink,
)
