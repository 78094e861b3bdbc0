"""
===============================================================================
MODULE: modulation.py
===============================================================================

PURPOSE:
    Gray-mapped QAM following the 3GPP downlink constellation tables, with
    unit average symbol energy.

USAGE EXAMPLES:
    from lte_baseband.modulation import map_qam

    map_qam([0, 0], "QPSK")            # [(1+1j)/sqrt(2)]
    map_qam(bits, "16QAM")

MAPPING RULE:
    Even bits drive the in-phase axis, odd bits the quadrature axis. On each
    axis the first bit is the sign (0 -> +) and the remaining bits pick the
    amplitude level by the nested rule level = 2^m - (1 - 2b) * (...), which
    reproduces the QPSK, 16QAM and 64QAM tables exactly.
===============================================================================
"""

import math
from typing import Dict

import numpy as np

from utils.exceptions import BlockInputError

BITS_PER_SYMBOL: Dict[str, int] = {"QPSK": 2, "16QAM": 4, "64QAM": 6}

# Average energy of the odd-integer grid per modulation
_ENERGY: Dict[str, float] = {"QPSK": 2.0, "16QAM": 10.0, "64QAM": 42.0}


def canonical_modulation(name: str) -> str:
    """Accept spellings like 'qpsk', '16-QAM', '16qam'."""
    key = str(name).upper().replace("-", "").replace("_", "").replace(" ", "")
    if key not in BITS_PER_SYMBOL:
        raise BlockInputError(
            f"Unsupported modulation {name!r} (supported: {', '.join(BITS_PER_SYMBOL)})"
        )
    return key


def bits_per_symbol(modulation: str) -> int:
    return BITS_PER_SYMBOL[canonical_modulation(modulation)]


def _axis_levels(axis_bits: np.ndarray) -> np.ndarray:
    """Odd-integer amplitude from one axis' bits (columns: sign bit first)."""
    n_bits = axis_bits.shape[1]
    sign = 1 - 2 * axis_bits[:, 0].astype(np.int64)
    if n_bits == 1:
        return sign
    level = np.ones(axis_bits.shape[0], dtype=np.int64)
    # build from the least significant amplitude bit outwards
    for depth, column in enumerate(range(n_bits - 1, 0, -1)):
        bit = 1 - 2 * axis_bits[:, column].astype(np.int64)
        level = 2 ** (depth + 1) - bit * level
    return sign * level


def map_qam(bits, modulation: str = "QPSK") -> np.ndarray:
    """
    Map a bit sequence onto constellation points.

    RETURNS:
        np.ndarray: complex128 symbols, len(bits) / bits_per_symbol of them

    RAISES:
        BlockInputError: bit count not divisible by the bits per symbol
    """
    name = canonical_modulation(modulation)
    per_symbol = BITS_PER_SYMBOL[name]
    array = np.asarray(bits, dtype=np.uint8).ravel()
    if array.size % per_symbol:
        raise BlockInputError(
            f"{name} needs a multiple of {per_symbol} bits, got {array.size}"
        )
    groups = array.reshape(-1, per_symbol)
    in_phase = _axis_levels(groups[:, 0::2])
    quadrature = _axis_levels(groups[:, 1::2])
    return (in_phase + 1j * quadrature) / math.sqrt(_ENERGY[name])


def constellation(modulation: str) -> np.ndarray:
    """All points of a constellation, indexed by the integer value of their bits."""
    per_symbol = bits_per_symbol(modulation)
    values = np.arange(2 ** per_symbol)
    bits = ((values[:, None] >> np.arange(per_symbol - 1, -1, -1)) & 1).astype(np.uint8)
    return map_qam(bits.ravel(), modulation)
