"""
===============================================================================
MODULE: quantization.py
===============================================================================

PURPOSE:
    Signed fractional fixed-point format used by the hardware data path
    (q_bits per real component, step 2^-(q_bits-1)).

USAGE EXAMPLES:
    from lte_baseband.quantization import quantize

    q = quantize(samples, 14)
    q.values        # quantized complex samples
    q.codes         # integer codes, shape (..., 2) for complex input
    q.saturated     # number of clipped components

NOTES:
    - Round to nearest (ties toward +inf) on the grid k * 2^-(q_bits-1)
    - Symmetric saturation at +-(1 - 2^-(q_bits-1)); saturation never
      raises, it is counted
===============================================================================
"""

from dataclasses import dataclass

import numpy as np

from utils.exceptions import BlockInputError

MIN_Q_BITS = 2
MAX_Q_BITS = 32


@dataclass(frozen=True, eq=False)
class QuantizedSamples:
    values: np.ndarray
    codes: np.ndarray
    q_bits: int
    saturated: int

    @property
    def step(self) -> float:
        return quantization_step(self.q_bits)


def quantization_step(q_bits: int) -> float:
    return 2.0 ** -(q_bits - 1)


def max_code(q_bits: int) -> int:
    return 2 ** (q_bits - 1) - 1


def _quantize_real(x: np.ndarray, q_bits: int):
    step = quantization_step(q_bits)
    limit = max_code(q_bits)
    raw = np.floor(x / step + 0.5)
    codes = np.clip(raw, -limit, limit)
    saturated = int(np.count_nonzero(raw != codes))
    return codes.astype(np.int64), saturated


def quantize(x, q_bits: int) -> QuantizedSamples:
    """
    Quantize real or complex samples to q_bits per component.

    RAISES:
        BlockInputError: q_bits outside [2, 32]
    """
    if not MIN_Q_BITS <= int(q_bits) <= MAX_Q_BITS:
        raise BlockInputError(f"q_bits must be in [{MIN_Q_BITS}, {MAX_Q_BITS}], got {q_bits}")
    q_bits = int(q_bits)
    array = np.asarray(x)
    step = quantization_step(q_bits)

    if np.iscomplexobj(array):
        re_codes, re_sat = _quantize_real(array.real, q_bits)
        im_codes, im_sat = _quantize_real(array.imag, q_bits)
        values = re_codes * step + 1j * (im_codes * step)
        codes = np.stack([re_codes, im_codes], axis=-1)
        return QuantizedSamples(values, codes, q_bits, re_sat + im_sat)

    codes, saturated = _quantize_real(array.astype(np.float64), q_bits)
    return QuantizedSamples(codes * step, codes, q_bits, saturated)
