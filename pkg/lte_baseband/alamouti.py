"""
Alamouti space-time block code for two transmit antennas.

A symbol pair (s1, s2) occupies two symbol periods:

    antenna 0:  s1   -conj(s2)
    antenna 1:  s2    conj(s1)

In the simulated chain the pairs are consecutive symbols of an OFDM
symbol's data stream, so each antenna stream keeps the input length.
"""

from typing import Tuple

import numpy as np

from utils.exceptions import BlockInputError


def alamouti_code_matrix(s1: complex, s2: complex) -> np.ndarray:
    """Code matrix C, rows = antennas, columns = symbol periods."""
    return np.array([[s1, -np.conj(s2)], [s2, np.conj(s1)]], dtype=np.complex128)


def alamouti_encode_pair(s1: complex, s2: complex) -> Tuple[Tuple[complex, complex], Tuple[complex, complex]]:
    matrix = alamouti_code_matrix(s1, s2)
    return (complex(matrix[0, 0]), complex(matrix[0, 1])), (complex(matrix[1, 0]), complex(matrix[1, 1]))


def alamouti_encode(symbols) -> Tuple[np.ndarray, np.ndarray]:
    """
    Encode a symbol stream into two antenna streams.

    RAISES:
        BlockInputError: odd number of symbols
    """
    stream = np.asarray(symbols, dtype=np.complex128).ravel()
    if stream.size % 2:
        raise BlockInputError(f"Alamouti encoding needs symbol pairs, got {stream.size} symbols")
    s1 = stream[0::2]
    s2 = stream[1::2]
    antenna0 = np.empty_like(stream)
    antenna1 = np.empty_like(stream)
    antenna0[0::2] = s1
    antenna0[1::2] = -np.conj(s2)
    antenna1[0::2] = s2
    antenna1[1::2] = np.conj(s1)
    return antenna0, antenna1
