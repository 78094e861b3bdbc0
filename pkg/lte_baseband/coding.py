"""
===============================================================================
MODULE: coding.py
===============================================================================

PURPOSE:
    Rate-1/3 systematic channel coder: the systematic stream plus two
    parity streams from 8-state recursive systematic convolutional encoders,
    the second fed through a quadratic permutation interleaver.

USAGE EXAMPLES:
    from lte_baseband.coding import encode_channel, systematic_bits

    coded = encode_channel(bits, code_block_size=1024)   # 3 * len(bits)
    assert (systematic_bits(coded) == bits).all()

CODE STRUCTURE:
    - Constituent encoder: feedback 1 + D^2 + D^3, feedforward 1 + D + D^3,
      zero initial state, no trellis termination
    - Interleaver: pi(i) = (f1*i + f2*i^2) mod K
    - Output order per bit: s_i, p1_i, p2_i

NOTES:
    The coder gives the simulated chain the right token rates; it is not a
    bit-exact reproduction of a standard turbo coder (no tail bits, no
    rate matching).
===============================================================================
"""

from typing import Dict, Tuple

import numpy as np

from utils.exceptions import BlockInputError

# (f1, f2) per block size
QPP_PARAMETERS: Dict[int, Tuple[int, int]] = {
    40: (3, 10),
    1024: (31, 64),
    6144: (263, 480),
}


def _rsc_tables() -> Tuple[np.ndarray, np.ndarray]:
    """Next-state and parity tables indexed [state, bit]; state = (d1, d2, d3) MSB first."""
    next_state = np.zeros((8, 2), dtype=np.int64)
    parity = np.zeros((8, 2), dtype=np.uint8)
    for state in range(8):
        d1, d2, d3 = (state >> 2) & 1, (state >> 1) & 1, state & 1
        for bit in (0, 1):
            a = bit ^ d2 ^ d3
            parity[state, bit] = a ^ d1 ^ d3
            next_state[state, bit] = (a << 2) | (d1 << 1) | d2
    return next_state, parity


_NEXT_STATE, _PARITY = _rsc_tables()


def qpp_interleaver(block_size: int) -> np.ndarray:
    if block_size not in QPP_PARAMETERS:
        raise BlockInputError(
            f"Unsupported code block size {block_size} (supported: {sorted(QPP_PARAMETERS)})"
        )
    f1, f2 = QPP_PARAMETERS[block_size]
    i = np.arange(block_size, dtype=np.int64)
    return (f1 * i + f2 * i * i) % block_size


def rsc_encode(bits: np.ndarray) -> np.ndarray:
    """Parity stream of one constituent encoder."""
    next_state = _NEXT_STATE.tolist()
    parity = _PARITY.tolist()
    out = []
    state = 0
    for bit in np.asarray(bits).tolist():
        out.append(parity[state][bit])
        state = next_state[state][bit]
    return np.array(out, dtype=np.uint8)


def _as_bits(bits) -> np.ndarray:
    array = np.asarray(bits, dtype=np.uint8).ravel()
    if array.size and array.max() > 1:
        raise BlockInputError("bit sequences may only contain 0 and 1")
    return array


def encode_channel(bits, code_block_size: int = 1024) -> np.ndarray:
    """
    Encode whole code blocks at rate 1/3.

    RAISES:
        BlockInputError: length not a multiple of code_block_size, or an
            unsupported block size
    """
    array = _as_bits(bits)
    interleaver = qpp_interleaver(code_block_size)
    if array.size % code_block_size:
        raise BlockInputError(
            f"Input length {array.size} is not a multiple of the code block size {code_block_size}"
        )

    coded = np.empty(3 * array.size, dtype=np.uint8)
    for start in range(0, array.size, code_block_size):
        block = array[start:start + code_block_size]
        triple = np.stack([block, rsc_encode(block), rsc_encode(block[interleaver])], axis=1)
        coded[3 * start:3 * (start + code_block_size)] = triple.ravel()
    return coded


def code_blocks_needed(n_bits: int, code_block_size: int) -> int:
    return -(-n_bits // code_block_size)


def encode_padded(bits, code_block_size: int = 1024) -> np.ndarray:
    """
    Zero-pad to whole code blocks, encode, and keep the triples of the real
    bits, so the output is exactly three times the input length.
    """
    array = _as_bits(bits)
    n_blocks = code_blocks_needed(array.size, code_block_size)
    padded = np.zeros(n_blocks * code_block_size, dtype=np.uint8)
    padded[:array.size] = array
    return encode_channel(padded, code_block_size)[:3 * array.size]


def systematic_bits(coded) -> np.ndarray:
    return np.asarray(coded, dtype=np.uint8)[0::3]
