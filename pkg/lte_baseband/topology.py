"""
===============================================================================
MODULE: topology.py
===============================================================================

PURPOSE:
    Builds the system description of the LTE downlink shared-channel
    transmitter for one application:

        bit_source -> coder -> mapper -> alamouti -+-> grid_mapper_0 -> ifft_0 -> cp_0 -> sink_0
                                                   +-> grid_mapper_1 -> ifft_1 -> cp_1 -> sink_1

    With tx_antennas=1 the Alamouti block is left out and a single antenna
    branch follows the mapper.

USAGE EXAMPLES:
    from lte_baseband.topology import lte_topology
    from sim_kernel.topology import build_system

    description = lte_topology({"fft_size": 1024, "modulation": "QPSK",
                                "quantization_bits": 14, "clock_mhz": 50})
    system = build_system(description, library=library)

LATENCY MODEL (one bit or sample per clock cycle, II = latency):
    coder        code blocks x code_block_size
    mapper       allocated subcarriers + 2
    alamouti     allocated subcarriers + 2
    grid_mapper  used subcarriers
    ifft         N + 4 * log2(N)
    cp_inserter  N + longest cyclic prefix
===============================================================================
"""

import math
from typing import Any, Dict, List, Mapping, Optional, Sequence

from lte_baseband.blocks import (
    DEFAULT_CLOCK_MHZ,
    DEFAULT_CODE_BLOCK_SIZE,
    DEFAULT_MODULATION,
    DEFAULT_QUANTIZATION_BITS,
    LteSettings,
)
from lte_baseband.coding import code_blocks_needed
from lte_baseband.grid import DEFAULT_PILOT_PERIOD
from lte_baseband.modulation import canonical_modulation
from lte_baseband.params import fft_size_for_bandwidth
from sim_kernel.topology import DEFAULT_CHANNEL_CAPACITY, TopologyDescription, parse_topology
from utils.exceptions import TopologyError

CHAIN_DEFAULTS: Dict[str, Any] = {
    "modulation": DEFAULT_MODULATION,
    "code_block_size": DEFAULT_CODE_BLOCK_SIZE,
    "quantization_bits": DEFAULT_QUANTIZATION_BITS,
    "clock_mhz": DEFAULT_CLOCK_MHZ,
    "cp_mode": "normal",
    "pilot_period": DEFAULT_PILOT_PERIOD,
}

# Application parameters that describe the study, not the hardware blocks
_NON_BLOCK_PARAMETERS = ("fpga_part", "bandwidth_mhz", "tx_antennas", "coding_rate")


def chain_parameters(app_params: Mapping[str, Any]) -> Dict[str, Any]:
    """Block parameters of the chain: defaults, bandwidth resolved to fft_size."""
    merged = {**CHAIN_DEFAULTS, **{k: v for k, v in app_params.items() if v is not None}}
    if "fft_size" not in merged:
        if "bandwidth_mhz" not in merged:
            raise TopologyError("LTE chain needs fft_size or bandwidth_mhz")
        merged["fft_size"] = fft_size_for_bandwidth(merged["bandwidth_mhz"])
    merged["fft_size"] = int(merged["fft_size"])
    merged["modulation"] = canonical_modulation(merged["modulation"])
    return {k: v for k, v in merged.items() if k not in _NON_BLOCK_PARAMETERS}


def lte_latencies(settings: LteSettings) -> Dict[str, int]:
    n = settings.params.fft_size
    allocated = settings.allocated_subcarriers
    return {
        "channel_coder": code_blocks_needed(settings.info_bits_per_symbol, settings.code_block_size)
        * settings.code_block_size,
        "qam_mapper": allocated + 2,
        "alamouti_encoder": allocated + 2,
        "grid_mapper": settings.params.used_subcarriers,
        "ifft": n + 4 * int(math.log2(n)),
        "cp_inserter": n + settings.params.max_cp_length,
    }


def lte_topology(
    app_params: Mapping[str, Any],
    name: str = "lte_tx",
    custom_parameters: Optional[Mapping[str, Sequence[str]]] = None,
    channel_capacity: int = DEFAULT_CHANNEL_CAPACITY
) -> TopologyDescription:
    """
    Topology description of the transmitter for one application.

    ARGUMENTS:
        app_params: application bindings (fft_size or bandwidth_mhz, modulation,
            code_block_size, quantization_bits, clock_mhz, cp_mode, pilot_period,
            tx_antennas, plus custom parameters)
        custom_parameters: custom parameter name -> block types whose
            config keys include it

    RAISES:
        TopologyError: missing FFT size/bandwidth or unsupported antenna count
    """
    tx_antennas = int(app_params.get("tx_antennas", 2))
    if tx_antennas not in (1, 2):
        raise TopologyError(f"LTE chain supports 1 or 2 transmit antennas, got {tx_antennas}")

    parameters = chain_parameters(app_params)
    settings = LteSettings.from_parameters(parameters)
    latencies = lte_latencies(settings)
    custom_parameters = custom_parameters or {}

    instances: List[Dict[str, Any]] = []
    channels: List[Dict[str, Any]] = []

    def add(instance_id: str, block_type: str) -> None:
        latency = latencies.get(block_type, 0)
        extra = [p for p, types in custom_parameters.items() if block_type in types]
        instances.append({
            "instance_id": instance_id,
            "block_type": block_type,
            "parameters": dict(parameters),
            "latency_cycles": latency,
            "initiation_interval_cycles": max(1, latency),
            "extra_key_parameters": extra,
        })

    def connect(src: str, dst: str) -> None:
        channels.append({"src": src, "dst": dst, "capacity": channel_capacity})

    add("bit_source", "bit_source")
    add("coder", "channel_coder")
    add("mapper", "qam_mapper")
    connect("bit_source.out", "coder.in")
    connect("coder.out", "mapper.in")

    if tx_antennas == 2:
        add("alamouti", "alamouti_encoder")
        connect("mapper.out", "alamouti.in")
        feeds = ["alamouti.ant0", "alamouti.ant1"]
    else:
        feeds = ["mapper.out"]

    for antenna, feed in enumerate(feeds):
        add(f"grid_mapper_{antenna}", "grid_mapper")
        add(f"ifft_{antenna}", "ifft")
        add(f"cp_{antenna}", "cp_inserter")
        add(f"sink_{antenna}", "antenna_sink")
        connect(feed, f"grid_mapper_{antenna}.in")
        connect(f"grid_mapper_{antenna}.out", f"ifft_{antenna}.in")
        connect(f"ifft_{antenna}.out", f"cp_{antenna}.in")
        connect(f"cp_{antenna}.out", f"sink_{antenna}.in")

    return parse_topology({
        "name": name,
        "clock_mhz": float(parameters["clock_mhz"]),
        "instances": instances,
        "channels": channels,
    })


def symbols_per_subframe(app_params: Mapping[str, Any]) -> int:
    return LteSettings.from_parameters(chain_parameters(app_params)).params.symbols_per_subframe


def cycles_per_subframe(app_params: Mapping[str, Any]) -> int:
    """Clock cycles in 1 ms at the application clock."""
    clock_mhz = float(chain_parameters(app_params)["clock_mhz"])
    return round(clock_mhz * 1e3)
