"""
===============================================================================
MODULE: test_alamouti.py
===============================================================================

PURPOSE:
    Unit tests for two-antenna Alamouti encoding.

USAGE:
    pytest tests/unit/test_alamouti.py
===============================================================================
"""

import numpy as np
import pytest

from lte_baseband.alamouti import alamouti_code_matrix, alamouti_encode, alamouti_encode_pair
from utils.exceptions import BlockInputError


def test_basis_pair():
    ant0, ant1 = alamouti_encode_pair(1, 0)

    assert ant0 == (1, 0)
    assert ant1 == (0, 1)


def test_conjugation_rule():
    ant0, ant1 = alamouti_encode_pair(1 + 1j, 1 - 1j)

    assert ant0 == (1 + 1j, -1 - 1j)
    assert ant1 == (1 - 1j, 1 - 1j)


def test_orthogonality_on_random_pairs():
    """Test C C^H = (|s1|^2 + |s2|^2) I for random symbol pairs."""
    rng = np.random.default_rng(2)
    pairs = rng.normal(size=(1000, 2)) + 1j * rng.normal(size=(1000, 2))

    for s1, s2 in pairs:
        c = alamouti_code_matrix(s1, s2)
        expected = (abs(s1) ** 2 + abs(s2) ** 2) * np.eye(2)
        np.testing.assert_allclose(c @ c.conj().T, expected, rtol=0, atol=1e-12 * max(1.0, expected[0, 0]))


def test_stream_encoding_matches_pairs():
    rng = np.random.default_rng(3)
    symbols = rng.normal(size=8) + 1j * rng.normal(size=8)

    ant0, ant1 = alamouti_encode(symbols)

    assert ant0.size == ant1.size == symbols.size
    for k in range(0, symbols.size, 2):
        pair0, pair1 = alamouti_encode_pair(symbols[k], symbols[k + 1])
        assert tuple(ant0[k:k + 2]) == pair0
        assert tuple(ant1[k:k + 2]) == pair1


def test_odd_stream_rejected():
    with pytest.raises(BlockInputError):
        alamouti_encode(np.ones(3, dtype=complex))


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
