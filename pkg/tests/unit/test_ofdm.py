"""
===============================================================================
MODULE: test_ofdm.py
===============================================================================

PURPOSE:
    Unit tests for OFDM modulation, fixed-point quantization and sample dumps.

USAGE:
    pytest tests/unit/test_ofdm.py

WHAT THIS MODULE DOES:
    1. Tests subcarrier mapping, FFT round-trip and Parseval
    2. Tests cyclic prefix length and content
    3. Tests the quantizer (grid points, half-LSB bound, saturation)
    4. Tests the fixed-point IFFT against the double path
    5. Tests CSV / int16 sample dumps
===============================================================================
"""

import numpy as np
import pandas as pd
import pytest

from lte_baseband.ofdm import (
    demodulate_body,
    ifft_body,
    ifft_body_fixed,
    map_subcarriers,
    ofdm_modulate,
    ofdm_modulate_fixed,
)
from lte_baseband.params import params_for_fft_size
from lte_baseband.quantization import max_code, quantize
from lte_baseband.sample_dump import dump_samples_csv, dump_samples_int16, read_samples_int16
from utils.exceptions import BlockInputError

FFT_SIZES = (256, 512, 1024, 2048)


def _random_column(rng, params):
    k = params.used_subcarriers
    return (rng.normal(size=k) + 1j * rng.normal(size=k)) / np.sqrt(2)


# ============================================================================
# DOUBLE PATH
# ============================================================================

def test_mapping_leaves_dc_and_guards_empty():
    params = params_for_fft_size(256)
    column = np.arange(1, params.used_subcarriers + 1, dtype=complex)

    spectrum = map_subcarriers(column, params)

    assert spectrum[0] == 0
    assert np.count_nonzero(spectrum) == params.used_subcarriers
    assert spectrum[1] == column[params.used_subcarriers // 2]
    assert spectrum[-1] == column[params.used_subcarriers // 2 - 1]


@pytest.mark.parametrize("fft_size", FFT_SIZES)
def test_fft_round_trip_and_parseval(fft_size):
    """Test 100 random columns per size: exact recovery and energy preservation."""
    params = params_for_fft_size(fft_size)
    rng = np.random.default_rng(fft_size)

    for _ in range(100):
        column = _random_column(rng, params)
        body = ifft_body(column, params)

        recovered = demodulate_body(body, params)
        assert np.linalg.norm(recovered - column) <= 1e-9 * np.linalg.norm(column)
        energy_time = np.sum(np.abs(body) ** 2)
        energy_freq = np.sum(np.abs(column) ** 2)
        assert energy_time == pytest.approx(energy_freq, rel=1e-9)


def test_symbol_length_with_cp():
    params = params_for_fft_size(2048)

    assert ofdm_modulate(np.zeros(1200), params, 0).size == 2208
    assert ofdm_modulate(np.zeros(1200), params, 1).size == 2192


def test_zero_column_gives_zero_samples():
    params = params_for_fft_size(512)

    samples = ofdm_modulate(np.zeros(params.used_subcarriers), params, 2)

    assert samples.size == 512 + 36
    assert not samples.any()


@pytest.mark.parametrize("cp_mode, index", [("normal", 0), ("normal", 4), ("extended", 2)])
def test_prefix_copies_body_tail(cp_mode, index):
    params = params_for_fft_size(1024, cp_mode=cp_mode)
    column = _random_column(np.random.default_rng(5), params)

    samples = ofdm_modulate(column, params, index)
    cp_len = params.cp_length(index)

    np.testing.assert_array_equal(samples[:cp_len], samples[-cp_len:])
    np.testing.assert_array_equal(samples[cp_len:], ifft_body(column, params))


def test_wrong_column_length():
    with pytest.raises(BlockInputError):
        ofdm_modulate(np.zeros(100), params_for_fft_size(512), 0)


# ============================================================================
# QUANTIZATION
# ============================================================================

@pytest.mark.parametrize("q_bits", [2, 8, 14, 32])
def test_zero_is_fixed_point(q_bits):
    assert quantize(np.array([0.0]), q_bits).values[0] == 0.0


def test_representable_value_is_exact():
    assert quantize(np.array([0.5]), 2).values[0] == 0.5


def test_half_lsb_bound_at_14_bits():
    """Test |q(x) - x| <= 2^-14 away from the saturation edge."""
    rng = np.random.default_rng(14)
    limit = 1 - 2.0 ** -13
    x = rng.uniform(-limit, limit, size=100_000)

    q = quantize(x, 14)

    assert np.max(np.abs(q.values - x)) <= 2.0 ** -14
    assert q.saturated == 0


def test_saturation_is_counted_not_raised():
    q = quantize(np.array([0.9999, -1.0, 2.0 + 0.1j]), 8)

    assert q.saturated == 3
    assert np.max(np.abs(q.codes)) == max_code(8)
    assert np.all(np.abs(q.values.real) <= 1 - 2.0 ** -7)


def test_complex_codes_shape():
    q = quantize(np.array([0.25 + 0.5j, -0.25j]), 4)

    assert q.codes.shape == (2, 2)
    assert q.codes.tolist() == [[2, 4], [0, -2]]


@pytest.mark.parametrize("q_bits", [1, 33])
def test_q_bits_range(q_bits):
    with pytest.raises(BlockInputError):
        quantize(np.zeros(2), q_bits)


# ============================================================================
# FIXED-POINT PATH
# ============================================================================

@pytest.mark.parametrize("fft_size", FFT_SIZES)
def test_fixed_ifft_tracks_double_path(fft_size):
    """Test the 1/N fixed-point body stays within half an LSB per component."""
    params = params_for_fft_size(fft_size)
    column = _random_column(np.random.default_rng(fft_size + 1), params)

    fixed, exponent = ifft_body_fixed(column, params, q_bits=14)
    reference = ifft_body(column, params) / np.sqrt(fft_size)

    assert exponent == 0
    assert fixed.saturated == 0
    assert np.max(np.abs(fixed.values.real - reference.real)) <= 2.0 ** -14 + 1e-15
    assert np.max(np.abs(fixed.values.imag - reference.imag)) <= 2.0 ** -14 + 1e-15


def test_block_floating_normalizes_peak():
    params = params_for_fft_size(1024)
    column = _random_column(np.random.default_rng(9), params)

    fixed, exponent = ifft_body_fixed(column, params, q_bits=14, block_floating=True)
    peak = np.max(np.abs(np.concatenate([fixed.values.real, fixed.values.imag])))

    assert exponent > 0
    assert 0.5 - 2.0 ** -13 <= peak < 1.0


def test_fixed_modulation_has_prefix():
    params = params_for_fft_size(256)
    column = _random_column(np.random.default_rng(4), params)

    samples, _ = ofdm_modulate_fixed(column, params, 0, q_bits=12)
    cp_len = params.cp_length(0)

    assert samples.values.size == 256 + cp_len
    assert samples.codes.shape == (256 + cp_len, 2)
    np.testing.assert_array_equal(samples.values[:cp_len], samples.values[-cp_len:])


# ============================================================================
# SAMPLE DUMPS
# ============================================================================

def test_csv_dump_is_exact(tmp_path):
    samples = np.array([0.1 + 0.2j, -1 / 3 + 0j, 1e-17 - 2j])

    frame = pd.read_csv(dump_samples_csv(samples, tmp_path / "ant0.csv"), float_precision="round_trip")

    assert list(frame.columns) == ["re", "im"]
    np.testing.assert_array_equal(frame["re"] + 1j * frame["im"], samples)


def test_int16_dump_reads_back(tmp_path):
    q = quantize(np.array([0.5 - 0.25j, -0.125 + 0.0625j]), 14)

    path = dump_samples_int16(q, tmp_path / "ant0.bin")

    assert path.stat().st_size == 2 * 2 * 2
    np.testing.assert_array_equal(read_samples_int16(path, 14), q.values)


def test_int16_dump_needs_16_bits_or_fewer(tmp_path):
    with pytest.raises(BlockInputError):
        dump_samples_int16(quantize(np.zeros(2), 20), tmp_path / "x.bin")


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
