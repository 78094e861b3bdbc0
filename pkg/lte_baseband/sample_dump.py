"""
Per-antenna sample dumps for inspection outside the simulator.

    dump_samples_csv(samples, "ant0.csv")        # columns re,im
    dump_samples_int16(quantized, "ant0.bin")    # little-endian int16 re,im pairs
"""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from lte_baseband.quantization import QuantizedSamples
from utils.exceptions import BlockInputError

PathLike = Union[str, Path]


def dump_samples_csv(samples, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.asarray(samples, dtype=np.complex128).ravel()
    frame = pd.DataFrame({"re": data.real, "im": data.imag})
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def dump_samples_int16(quantized: QuantizedSamples, path: PathLike) -> Path:
    """
    Raw interleaved int16 codes.

    RAISES:
        BlockInputError: q_bits above 16 does not fit in int16
    """
    if quantized.q_bits > 16:
        raise BlockInputError(f"int16 dump needs q_bits <= 16, got {quantized.q_bits}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(np.asarray(quantized.codes).astype("<i2").ravel().tobytes())
    return path


def read_samples_int16(path: PathLike, q_bits: int) -> np.ndarray:
    raw = np.frombuffer(Path(path).read_bytes(), dtype="<i2").astype(np.float64)
    step = 2.0 ** -(q_bits - 1)
    return raw[0::2] * step + 1j * (raw[1::2] * step)
