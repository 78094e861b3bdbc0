"""
===============================================================================
MODULE: capacity.py
===============================================================================

PURPOSE:
    Average MISO capacity under Rayleigh fading and the energy efficiency of
    each application over a transmit-power sweep, with and without the
    estimated circuit power.

USAGE EXAMPLES:
    from ee_analyzer.capacity import ee_sweep, parse_pt_range

    curves = ee_sweep(app_reports, parse_pt_range("-10:50:1"), config, seed=2016)

MODEL:
    C  = W * E[ log2(1 + ||h||^2 * pt * G / nt) ]     h ~ CN(0, I_nt)
    EE = C / (pt + p_circuit)                          bit/J

    G = PL / (N0 W), 1 when normalized. The expectation is a Monte Carlo
    mean; all curves of one sweep share the same fading draws.
===============================================================================
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ee_analyzer.models import (
    EeCurve,
    EeParams,
    EePoint,
    EeStudyConfig,
    FadingSamples,
    dbm_to_watt,
)
from utils.exceptions import EnergyEfficiencyError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

CURVE_COLUMNS = ["application", "mode", "pt_dbm", "p_circuit_mw", "p_total_dbm", "capacity_bps", "ee"]


def parse_pt_range(text: Union[str, Sequence[float]]) -> np.ndarray:
    """
    Transmit power sweep in dBm.

    ACCEPTS:
        "start:stop:step" (stop included), "a,b,c", a single value, or a
        sequence of numbers

    RAISES:
        EnergyEfficiencyError: malformed, non-finite, empty or not ascending
    """
    try:
        if isinstance(text, str) and ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if not step > 0:
                raise EnergyEfficiencyError(f"pt step must be positive, got {step}")
            if stop < start:
                raise EnergyEfficiencyError(f"pt range {text!r} is descending")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = start + step * np.arange(count)
        elif isinstance(text, str):
            values = np.array([float(part) for part in text.split(",") if part.strip()])
        else:
            values = np.asarray(text, dtype=float)
    except ValueError as e:
        raise EnergyEfficiencyError(f"Malformed pt range {text!r}: {e}") from e

    values = np.atleast_1d(values)
    if values.size == 0 or not np.all(np.isfinite(values)):
        raise EnergyEfficiencyError(f"pt range {text!r} must hold finite values")
    if np.any(np.diff(values) <= 0):
        raise EnergyEfficiencyError(f"pt range {text!r} must be strictly ascending")
    return values


def sample_channel(nt: int, n: int, seed: int) -> FadingSamples:
    """
    n i.i.d. draws of h with CN(0, 1) entries (unit power per antenna).

    RAISES:
        EnergyEfficiencyError: n < 1 or nt < 1
    """
    if n < 1 or nt < 1:
        raise EnergyEfficiencyError(f"Need n >= 1 and nt >= 1, got n={n}, nt={nt}")
    rng = np.random.default_rng(seed)
    h = (rng.standard_normal((n, nt)) + 1j * rng.standard_normal((n, nt))) / np.sqrt(2.0)
    return FadingSamples.from_coefficients(h)


def average_capacity(params: EeParams, pt_w: float, samples: FadingSamples) -> float:
    """
    Ergodic capacity in bit/s.

    RAISES:
        EnergyEfficiencyError: negative power, empty samples, or samples
            drawn for another antenna count
    """
    if pt_w < 0:
        raise EnergyEfficiencyError(f"Transmit power must be non-negative, got {pt_w} W")
    if len(samples) == 0:
        raise EnergyEfficiencyError("Capacity needs at least one fading sample")
    if samples.nt != params.nt:
        raise EnergyEfficiencyError(f"Samples drawn for nt={samples.nt}, params say nt={params.nt}")
    snr = samples.norm_squared * (pt_w * params.channel_gain() / params.nt)
    return params.w_hz * float(np.mean(np.log1p(snr))) / math.log(2.0)


def energy_efficiency(capacity_bps: float, pt_w: float, p_circuit_w: float) -> float:
    """
    RAISES:
        EnergyEfficiencyError: total power is not positive
    """
    p_total = pt_w + p_circuit_w
    if not p_total > 0:
        raise EnergyEfficiencyError(f"Total power must be positive, got {p_total} W")
    return capacity_bps / p_total


def _curve(
    application: str,
    mode: str,
    p_circuit_w: float,
    params: EeParams,
    pt_dbm: np.ndarray,
    capacities: Sequence[float]
) -> EeCurve:
    points = []
    for dbm, capacity in zip(pt_dbm, capacities):
        pt_w = dbm_to_watt(float(dbm))
        points.append(EePoint(
            pt_dbm=float(dbm),
            pt_w=pt_w,
            p_circuit_w=p_circuit_w,
            p_total_w=pt_w + p_circuit_w,
            capacity_bps=capacity,
            ee_bit_per_joule=energy_efficiency(capacity, pt_w, p_circuit_w),
        ))
    return EeCurve(
        application=application,
        mode=mode,
        p_circuit_mw=p_circuit_w * 1e3,
        w_hz=params.w_hz,
        nt=params.nt,
        points=tuple(points),
    )


def ee_sweep(
    app_reports: Sequence[Tuple[Any, Any]],
    pt_dbm: Union[str, Sequence[float], np.ndarray],
    config: EeStudyConfig,
    n_samples: Optional[int] = None,
    seed: int = 0
) -> List[EeCurve]:
    """
    EE curves of every application, without and with circuit power.

    ARGUMENTS:
        app_reports: (application, power report) pairs; the application
            provides name, ofdm.bandwidth_hz and parameters["tx_antennas"],
            the report's total_mw is used as circuit power
        pt_dbm: transmit power sweep (see parse_pt_range)
        n_samples: fading draws (default: config.n_samples)

    RETURNS:
        List[EeCurve]: two curves per application, in input order
    """
    pt_dbm = parse_pt_range(pt_dbm)
    n = n_samples or config.n_samples
    samples_by_nt: Dict[int, FadingSamples] = {}

    curves: List[EeCurve] = []
    for app, report in app_reports:
        params = config.params_for(app.ofdm.bandwidth_hz, int(app.parameters.get("tx_antennas", 2)))
        if params.nt not in samples_by_nt:
            samples_by_nt[params.nt] = sample_channel(params.nt, n, seed)
        samples = samples_by_nt[params.nt]

        capacities = [average_capacity(params, dbm_to_watt(float(dbm)), samples) for dbm in pt_dbm]
        p_circuit_w = report.total_mw * 1e-3
        curves.append(_curve(app.name, "without_circuit", 0.0, params, pt_dbm, capacities))
        curves.append(_curve(app.name, "with_circuit", p_circuit_w, params, pt_dbm, capacities))

        best = curves[-1].best_point()
        logger.info(
            f"✅ {app.name}: EE sweep over {len(pt_dbm)} points, "
            f"best {best.ee_bit_per_joule:.4g} bit/J at {best.pt_dbm:g} dBm with circuit power"
        )
    return curves


def curves_to_frame(curves: Sequence[EeCurve]) -> pd.DataFrame:
    rows = [
        {
            "application": curve.application,
            "mode": curve.mode,
            "pt_dbm": point.pt_dbm,
            "p_circuit_mw": curve.p_circuit_mw,
            "p_total_dbm": point.p_total_dbm,
            "capacity_bps": point.capacity_bps,
            "ee": point.ee_bit_per_joule,
        }
        for curve in curves
        for point in curve.points
    ]
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def curves_to_csv(curves: Sequence[EeCurve], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(curves_to_frame(curves).to_csv(index=False, lineterminator="\n"), encoding="utf-8")
    return path
