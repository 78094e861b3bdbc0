"""
===============================================================================
MODULE: models.py
===============================================================================

PURPOSE:
    Types of the energy-efficiency study: link parameters, the EE study file,
    fading samples and the (pt, capacity, EE) curves produced by a sweep.

EE STUDY FILE (data/ee_params.json):
    {
      "nt": 2,                   # transmit antennas (omit: per application)
      "n_samples": 100000,       # Monte Carlo fading draws
      "normalized": true,        # PL / (N0 W) = 1
      "n0_dbm_hz": -174.0,
      "pl_db": 100.0,
      "w_hz": null,              # null: each application's channel bandwidth
      "pt_dbm": "-10:50:1"
    }

RELATED FILES:
    - ee_analyzer/capacity.py - sampling, capacity, sweep
===============================================================================
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.exceptions import EnergyEfficiencyError

CurveMode = Literal["without_circuit", "with_circuit"]

DEFAULT_N_SAMPLES = 100_000
THERMAL_NOISE_DBM_HZ = -174.0


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watt_to_dbm(watt: float) -> float:
    """
    RAISES:
        EnergyEfficiencyError: negative power (zero maps to -inf)
    """
    if watt < 0:
        raise EnergyEfficiencyError(f"Power must be non-negative, got {watt} W")
    if watt == 0:
        return -math.inf
    return 10.0 * math.log10(watt) + 30.0


class EeParams(BaseModel):
    """Link parameters of the MISO capacity expression."""

    model_config = ConfigDict(frozen=True)

    w_hz: float = Field(gt=0)
    nt: int = Field(default=2, ge=1)
    n0_dbm_hz: float = THERMAL_NOISE_DBM_HZ
    pl_db: float = 0.0
    normalized: bool = True

    def channel_gain(self) -> float:
        """PL / (N0 W) as a linear factor; 1 when normalized."""
        if self.normalized:
            return 1.0
        return 10.0 ** (-self.pl_db / 10.0) / (dbm_to_watt(self.n0_dbm_hz) * self.w_hz)


class EeStudyConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    nt: Optional[int] = Field(default=None, ge=1)
    n_samples: int = Field(default=DEFAULT_N_SAMPLES, ge=1)
    normalized: bool = True
    n0_dbm_hz: float = THERMAL_NOISE_DBM_HZ
    pl_db: float = 0.0
    w_hz: Optional[float] = Field(default=None, gt=0)
    pt_dbm: Optional[str] = None

    def params_for(self, bandwidth_hz: float, tx_antennas: int = 2) -> EeParams:
        """Link parameters of one application (w_hz and nt overrides win)."""
        return EeParams(
            w_hz=self.w_hz if self.w_hz is not None else bandwidth_hz,
            nt=self.nt if self.nt is not None else tx_antennas,
            n0_dbm_hz=self.n0_dbm_hz,
            pl_db=self.pl_db,
            normalized=self.normalized,
        )


def load_ee_params(path: Union[str, Path]) -> EeStudyConfig:
    """
    RAISES:
        EnergyEfficiencyError: missing file or schema violation
    """
    path = Path(path)
    try:
        return EeStudyConfig.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except FileNotFoundError as e:
        raise EnergyEfficiencyError(f"EE params file not found: {path}") from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise EnergyEfficiencyError(f"{path}: {e}") from e


@dataclass(frozen=True, eq=False)
class FadingSamples:
    """n draws of the nt-entry channel vector h, with ||h||^2 precomputed."""

    h: np.ndarray
    norm_squared: np.ndarray

    @classmethod
    def from_coefficients(cls, h: np.ndarray) -> "FadingSamples":
        h = np.atleast_2d(np.asarray(h, dtype=np.complex128))
        return cls(h=h, norm_squared=np.sum(np.abs(h) ** 2, axis=1))

    @property
    def nt(self) -> int:
        return self.h.shape[1]

    def __len__(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class EePoint:
    pt_dbm: float
    pt_w: float
    p_circuit_w: float
    p_total_w: float
    capacity_bps: float
    ee_bit_per_joule: float

    @property
    def p_total_dbm(self) -> float:
        return watt_to_dbm(self.p_total_w)


@dataclass(frozen=True)
class EeCurve:
    application: str
    mode: CurveMode
    p_circuit_mw: float
    w_hz: float
    nt: int
    points: Tuple[EePoint, ...]

    def best_point(self) -> EePoint:
        """Point of maximum energy efficiency (first one on ties)."""
        if not self.points:
            raise EnergyEfficiencyError(f"{self.application}/{self.mode}: empty curve")
        return max(self.points, key=lambda point: point.ee_bit_per_joule)

    def ee_values(self) -> np.ndarray:
        return np.array([point.ee_bit_per_joule for point in self.points])
