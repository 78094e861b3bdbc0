"""
===============================================================================
MODULE: power.py
===============================================================================

PURPOSE:
    Turns time-activity coefficients and characterized power records into
    system power estimates: the activity-weighted estimate, the cumulative
    baseline that ignores activity, per-block breakdowns and error metrics.

USAGE EXAMPLES:
    from estimator.power import cumulative_power, estimate_power, power_breakdown

    report = estimate_power(result.alphas(), records, application="app1")
    baseline = cumulative_power(records, application="app1")
    shares = power_breakdown(report)

MODEL:
    contribution_i = alpha_i * p_active_i + (1 - alpha_i) * p_idle_i
    total          = sum of contributions (static power reported apart)

    The multi-mode form weights any number of named modes by their time
    residency; the two-state estimate is its {active, idle} case.
===============================================================================
"""

import math
from dataclasses import dataclass
from typing import Dict, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from power_model_library.library import records_for_modes
from power_model_library.models import IpConfigKey, IpPowerRecord, PowerLibrary
from utils.exceptions import EstimationError

Method = Literal["activity_weighted", "cumulative", "multimode"]

# Tolerance on residency fractions summing to one
RESIDENCY_TOLERANCE = 1e-9


class IpPower(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance_id: str
    block_type: str
    alpha: float
    p_active_mw: float
    p_idle_mw: float
    contribution_mw: float
    residency: Optional[Dict[str, float]] = None


class PowerReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_ip: Tuple[IpPower, ...]
    total_mw: float
    method: Method
    application: Optional[str] = None
    static_power_mw: Optional[float] = None

    def contribution(self, instance_id: str) -> float:
        for entry in self.per_ip:
            if entry.instance_id == instance_id:
                return entry.contribution_mw
        raise KeyError(instance_id)

    @property
    def total_with_static_mw(self) -> float:
        return self.total_mw + (self.static_power_mw or 0.0)


@dataclass(frozen=True)
class PowerBreakdown:
    application: Optional[str]
    total_mw: float
    shares: Dict[str, float]
    by_block_mw: Dict[str, float]
    by_block_share: Dict[str, float]

    def dominant_block(self) -> str:
        return max(self.by_block_share, key=self.by_block_share.get)


def _check_instance_sets(left: Mapping[str, object], right: Mapping[str, object], what: str) -> None:
    difference = sorted(set(left) ^ set(right))
    if difference:
        raise EstimationError(
            f"{what} cover different instances; mismatched: {', '.join(difference)}",
            instances=difference,
        )


def _convex(weight: float, high: float, low: float) -> float:
    value = weight * high + (1.0 - weight) * low
    return min(max(value, min(high, low)), max(high, low))


def estimate_power(
    alphas: Mapping[str, float],
    records: Mapping[str, IpPowerRecord],
    application: Optional[str] = None,
    static_power_mw: Optional[float] = None
) -> PowerReport:
    """
    Activity-weighted power estimate.

    ARGUMENTS:
        alphas: instance_id -> time-activity coefficient
        records: instance_id -> characterized power record

    RETURNS:
        PowerReport: method="activity_weighted", per-IP rows in alphas order

    RAISES:
        EstimationError: instance sets differ (names the symmetric
            difference) or an alpha lies outside [0, 1]
    """
    _check_instance_sets(alphas, records, "Activity coefficients and power records")

    per_ip = []
    for instance_id, alpha in alphas.items():
        alpha = float(alpha)
        if not 0.0 <= alpha <= 1.0:
            raise EstimationError(f"{instance_id}: alpha={alpha} outside [0, 1]", instances=[instance_id])
        record = records[instance_id]
        per_ip.append(IpPower(
            instance_id=instance_id,
            block_type=record.key.ip_name,
            alpha=alpha,
            p_active_mw=record.p_active_mw,
            p_idle_mw=record.p_idle_mw,
            contribution_mw=_convex(alpha, record.p_active_mw, record.p_idle_mw),
        ))

    return PowerReport(
        per_ip=tuple(per_ip),
        total_mw=math.fsum(entry.contribution_mw for entry in per_ip),
        method="activity_weighted",
        application=application,
        static_power_mw=static_power_mw,
    )


def cumulative_power(
    records: Mapping[str, IpPowerRecord],
    application: Optional[str] = None,
    static_power_mw: Optional[float] = None
) -> PowerReport:
    """
    Naive baseline: every IP at its active power (alpha = 1).

    RAISES:
        EstimationError: empty record set
    """
    if not records:
        raise EstimationError("Cumulative estimate needs at least one power record")
    per_ip = tuple(
        IpPower(
            instance_id=instance_id,
            block_type=record.key.ip_name,
            alpha=1.0,
            p_active_mw=record.p_active_mw,
            p_idle_mw=record.p_idle_mw,
            contribution_mw=record.p_active_mw,
        )
        for instance_id, record in records.items()
    )
    return PowerReport(
        per_ip=per_ip,
        total_mw=math.fsum(entry.contribution_mw for entry in per_ip),
        method="cumulative",
        application=application,
        static_power_mw=static_power_mw,
    )


def mode_powers(
    library: PowerLibrary,
    keys: Mapping[str, IpConfigKey],
    modes: Tuple[str, ...]
) -> Dict[str, Dict[str, float]]:
    """
    Per-instance power of each mode, in mW. "active" and "idle" come from
    the base record; other modes from records keyed with mode=<name>.
    """
    powers: Dict[str, Dict[str, float]] = {}
    for instance_id, key in keys.items():
        records = records_for_modes(library, key, modes)
        powers[instance_id] = {
            mode: (record.p_idle_mw if mode == "idle" else record.p_active_mw)
            for mode, record in records.items()
        }
    return powers


def estimate_multimode_power(
    residency: Mapping[str, Mapping[str, float]],
    powers: Mapping[str, Mapping[str, float]],
    block_types: Optional[Mapping[str, str]] = None,
    application: Optional[str] = None,
    static_power_mw: Optional[float] = None
) -> PowerReport:
    """
    Residency-weighted estimate over any set of named power modes.

    ARGUMENTS:
        residency: instance_id -> mode -> fraction of time (sums to 1)
        powers: instance_id -> mode -> power in mW
        block_types: instance_id -> block type (defaults to the instance id)

    RAISES:
        EstimationError: instance sets differ, a fraction is outside [0, 1],
            fractions do not sum to 1, or a mode has no power value
    """
    _check_instance_sets(residency, powers, "Mode residencies and mode powers")

    per_ip = []
    for instance_id, fractions in residency.items():
        fractions = {mode: float(value) for mode, value in fractions.items()}
        if any(not 0.0 <= value <= 1.0 for value in fractions.values()):
            raise EstimationError(f"{instance_id}: residency outside [0, 1]: {fractions}", instances=[instance_id])
        if abs(math.fsum(fractions.values()) - 1.0) > RESIDENCY_TOLERANCE:
            raise EstimationError(f"{instance_id}: residencies sum to {math.fsum(fractions.values())}, not 1",
                                  instances=[instance_id])
        available = powers[instance_id]
        missing = sorted(set(fractions) - set(available))
        if missing:
            raise EstimationError(f"{instance_id}: no power for modes {', '.join(missing)}", instances=[instance_id])

        values = [available[mode] for mode in fractions]
        contribution = math.fsum(fractions[mode] * available[mode] for mode in fractions)
        per_ip.append(IpPower(
            instance_id=instance_id,
            block_type=(block_types or {}).get(instance_id, instance_id),
            alpha=fractions.get("active", 0.0),
            p_active_mw=available.get("active", max(values)),
            p_idle_mw=available.get("idle", min(values)),
            contribution_mw=min(max(contribution, min(values)), max(values)),
            residency=fractions,
        ))

    return PowerReport(
        per_ip=tuple(per_ip),
        total_mw=math.fsum(entry.contribution_mw for entry in per_ip),
        method="multimode",
        application=application,
        static_power_mw=static_power_mw,
    )


def power_breakdown(report: PowerReport) -> PowerBreakdown:
    """
    Shares of the total per IP and grouped by block type.

    RAISES:
        EstimationError: total power is not positive
    """
    if not report.total_mw > 0:
        raise EstimationError(f"Cannot break down a report with total {report.total_mw} mW")

    shares = {entry.instance_id: entry.contribution_mw / report.total_mw for entry in report.per_ip}
    by_block: Dict[str, float] = {}
    for entry in report.per_ip:
        by_block[entry.block_type] = by_block.get(entry.block_type, 0.0) + entry.contribution_mw
    return PowerBreakdown(
        application=report.application,
        total_mw=report.total_mw,
        shares=shares,
        by_block_mw=by_block,
        by_block_share={block: value / report.total_mw for block, value in by_block.items()},
    )


def relative_error(estimate_mw: float, reference_mw: float) -> float:
    """
    Absolute relative error in percent.

    RAISES:
        EstimationError: reference is not positive
    """
    if not reference_mw > 0:
        raise EstimationError(f"Reference power must be positive, got {reference_mw}")
    return 100.0 * abs(estimate_mw - reference_mw) / reference_mw
