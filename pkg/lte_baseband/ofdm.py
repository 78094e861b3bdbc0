"""
===============================================================================
MODULE: ofdm.py
===============================================================================

PURPOSE:
    OFDM modulation of one grid column: subcarrier mapping around a null DC
    bin, inverse FFT and cyclic prefix insertion. A double-precision path
    (unitary scaling) and a fixed-point path (1/N scaling, quantized) are
    provided.

USAGE EXAMPLES:
    from lte_baseband.ofdm import ofdm_modulate, ofdm_modulate_fixed

    samples = ofdm_modulate(column, params, symbol_index_in_slot=0)
    fixed, exponent = ofdm_modulate_fixed(column, params, 0, q_bits=14)

SUBCARRIER MAPPING (K used subcarriers, N-point IFFT):
    column[0:K/2]  -> bins N-K/2 .. N-1   (negative frequencies)
    column[K/2:K]  -> bins 1 .. K/2       (positive frequencies)
    bin 0 (DC) and the guard band stay zero

SCALING:
    - Double path: numpy norm="ortho" (1/sqrt(N)), so Parseval holds
    - Fixed path: 1/N like a hardware radix-2 IFFT with per-stage halving;
      block floating (off by default) renormalizes the peak into [0.5, 1)
      by a power of two and reports the exponent
===============================================================================
"""

import math
from typing import Tuple

import numpy as np

from lte_baseband.params import OfdmParams, cp_length
from lte_baseband.quantization import QuantizedSamples, quantize
from utils.exceptions import BlockInputError


def _check_column(column, params: OfdmParams) -> np.ndarray:
    data = np.asarray(column, dtype=np.complex128).ravel()
    if data.size != params.used_subcarriers:
        raise BlockInputError(
            f"Grid column has {data.size} cells, expected {params.used_subcarriers} used subcarriers"
        )
    return data


def map_subcarriers(column, params: OfdmParams) -> np.ndarray:
    data = _check_column(column, params)
    n = params.fft_size
    half = params.used_subcarriers // 2
    spectrum = np.zeros(n, dtype=np.complex128)
    spectrum[n - half:] = data[:half]
    spectrum[1:half + 1] = data[half:]
    return spectrum


def unmap_subcarriers(spectrum, params: OfdmParams) -> np.ndarray:
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    n = params.fft_size
    half = params.used_subcarriers // 2
    return np.concatenate([spectrum[n - half:], spectrum[1:half + 1]])


def ifft_body(column, params: OfdmParams) -> np.ndarray:
    """Unitary inverse FFT of the mapped column (no cyclic prefix)."""
    return np.fft.ifft(map_subcarriers(column, params), norm="ortho")


def demodulate_body(body, params: OfdmParams) -> np.ndarray:
    """Forward FFT (unitary) and subcarrier extraction; inverse of ifft_body."""
    return unmap_subcarriers(np.fft.fft(np.asarray(body), norm="ortho"), params)


def add_cyclic_prefix(body, cp_len: int) -> np.ndarray:
    body = np.asarray(body)
    if cp_len == 0:
        return body.copy()
    return np.concatenate([body[-cp_len:], body])


def ofdm_modulate(column, params: OfdmParams, symbol_index_in_slot: int) -> np.ndarray:
    """
    Time-domain samples of one OFDM symbol, cyclic prefix first.

    RETURNS:
        np.ndarray: fft_size + cp_length samples

    RAISES:
        BlockInputError: column length differs from used_subcarriers
    """
    cp_len = cp_length(params, symbol_index_in_slot)
    return add_cyclic_prefix(ifft_body(column, params), cp_len)


def ifft_body_fixed(
    column,
    params: OfdmParams,
    q_bits: int,
    block_floating: bool = False
) -> Tuple[QuantizedSamples, int]:
    """
    Fixed-point IFFT body scaled by 1/N and quantized to q_bits.

    RETURNS:
        (samples, exponent): quantized body and the block-floating exponent
        e such that the true 1/N-scaled body is samples * 2^-e (0 when off)
    """
    body = np.fft.ifft(map_subcarriers(column, params))
    exponent = 0
    if block_floating:
        peak = float(np.max(np.abs(np.concatenate([body.real, body.imag])))) if body.size else 0.0
        if peak > 0:
            exponent = int(math.ceil(-math.log2(peak))) - 1
            body = body * (2.0 ** exponent)
    return quantize(body, q_bits), exponent


def ofdm_modulate_fixed(
    column,
    params: OfdmParams,
    symbol_index_in_slot: int,
    q_bits: int,
    block_floating: bool = False
) -> Tuple[QuantizedSamples, int]:
    body, exponent = ifft_body_fixed(column, params, q_bits, block_floating)
    cp_len = cp_length(params, symbol_index_in_slot)
    with_cp = QuantizedSamples(
        values=add_cyclic_prefix(body.values, cp_len),
        codes=add_cyclic_prefix(body.codes, cp_len),
        q_bits=body.q_bits,
        saturated=body.saturated,
    )
    return with_cp, exponent
