"""
===============================================================================
MODULE: reports.py
===============================================================================

PURPOSE:
    Export of power reports: JSON and CSV per report, a grouped breakdown CSV
    (one row per application, one column per block type) and the comparison
    table of activity-weighted against cumulative totals.

USAGE EXAMPLES:
    from estimator.reports import compare_table, load_reference, report_to_csv

    report_to_csv(report, "out/app1/report_activity.csv")
    table = compare_table(totals, reference=load_reference("data/reference/published_reference.json"))
    print(table.to_string(index=False))

OUTPUTS:
    report CSV columns: instance_id,alpha,p_active_mw,p_idle_mw,contribution_mw,share
    breakdown CSV columns: application,<block types...>,total_mw
    compare columns with reference data: application,label,reference_mw,
        activity_weighted_mw,activity_error_pct,cumulative_mw,
        cumulative_error_pct,measured_time_s,published_time_s,
        reference_time_s,speedup

NOTES:
    - Reference wattages are measured gate-level values used for error
      arithmetic only; nothing here produces them.
===============================================================================
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from estimator.power import PowerBreakdown, PowerReport, relative_error
from utils.exceptions import EstimationError

PathLike = Union[str, Path]

REPORT_COLUMNS = ["instance_id", "alpha", "p_active_mw", "p_idle_mw", "contribution_mw", "share"]


def _write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def report_to_dict(report: PowerReport) -> Dict[str, Any]:
    return report.model_dump(mode="json", exclude_none=True)


def report_to_json(report: PowerReport, path: PathLike) -> Path:
    return _write_text(path, json.dumps(report_to_dict(report), indent=2) + "\n")


def report_to_frame(report: PowerReport) -> pd.DataFrame:
    total = report.total_mw
    rows = [
        {
            "instance_id": entry.instance_id,
            "alpha": entry.alpha,
            "p_active_mw": entry.p_active_mw,
            "p_idle_mw": entry.p_idle_mw,
            "contribution_mw": entry.contribution_mw,
            "share": entry.contribution_mw / total if total > 0 else 0.0,
        }
        for entry in report.per_ip
    ]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def report_to_csv(report: PowerReport, path: PathLike) -> Path:
    """
    Per-IP CSV. A labeled static-power row is appended when the report
    carries one; it is not part of total_mw.
    """
    frame = report_to_frame(report)
    if report.static_power_mw is not None:
        frame = frame.astype({column: "float64" for column in REPORT_COLUMNS[1:]})
        nan = float("nan")
        frame.loc[len(frame)] = ["static_power", nan, nan, nan, report.static_power_mw, nan]
    return _write_text(path, frame.to_csv(index=False, lineterminator="\n"))


def breakdown_frame(breakdowns: Sequence[PowerBreakdown]) -> pd.DataFrame:
    """One row per application, one mW column per block type (first-seen order)."""
    block_types: List[str] = []
    for breakdown in breakdowns:
        for block in breakdown.by_block_mw:
            if block not in block_types:
                block_types.append(block)
    rows = []
    for breakdown in breakdowns:
        row: Dict[str, Any] = {"application": breakdown.application}
        row.update({block: breakdown.by_block_mw.get(block, 0.0) for block in block_types})
        row["total_mw"] = breakdown.total_mw
        rows.append(row)
    return pd.DataFrame(rows, columns=["application", *block_types, "total_mw"])


def breakdown_to_csv(breakdowns: Sequence[PowerBreakdown], path: PathLike) -> Path:
    return _write_text(path, breakdown_frame(breakdowns).to_csv(index=False, lineterminator="\n"))


# ============================================================================
# REFERENCE DATA AND COMPARISON
# ============================================================================

class ReferenceEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    application: str
    label: str = ""
    reference_mw: float = Field(gt=0)
    published_estimate_mw: Optional[float] = None
    published_error_pct: Optional[float] = None
    published_cumulative_mw: Optional[float] = None
    published_cumulative_error_pct: Optional[float] = None
    estimate_time_s: Optional[float] = None
    reference_time_s: Optional[float] = None


class ReferenceData(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    description: str = ""
    units: str = "mW"
    applications: List[ReferenceEntry]

    def for_application(self, application: str) -> Optional[ReferenceEntry]:
        for entry in self.applications:
            if entry.application == application:
                return entry
        return None


def load_reference(path: PathLike) -> ReferenceData:
    """
    RAISES:
        EstimationError: missing or malformed reference file
    """
    path = Path(path)
    try:
        return ReferenceData.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except FileNotFoundError as e:
        raise EstimationError(f"Reference file not found: {path}") from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise EstimationError(f"{path}: {e}") from e


TIME_COLUMNS = ["measured_time_s", "published_time_s", "reference_time_s", "speedup"]


@dataclass(frozen=True)
class ApplicationTotals:
    application: str
    label: str
    activity_weighted_mw: float
    cumulative_mw: float
    measured_time_s: Optional[float] = None


def _time_columns(measured_s: Optional[float], ref: Optional[ReferenceEntry]) -> Dict[str, Any]:
    published_s = ref.estimate_time_s if ref is not None else None
    reference_s = ref.reference_time_s if ref is not None else None
    speedup = reference_s / measured_s if reference_s and measured_s else None
    return dict(zip(TIME_COLUMNS, (measured_s, published_s, reference_s, speedup)))


def compare_table(
    totals: Sequence[ApplicationTotals],
    reference: Optional[ReferenceData] = None
) -> pd.DataFrame:
    """
    Activity-weighted against cumulative totals per application.

    Without reference data the table shows how far the cumulative baseline
    overshoots the activity-weighted estimate. With it, each total gets its
    error against the measured reference and its estimation time against the
    published and gate-level times (applications without a reference entry,
    or without times, get empty cells).
    """
    rows = []
    for entry in totals:
        row: Dict[str, Any] = {"application": entry.application, "label": entry.label}
        if reference is None:
            row["activity_weighted_mw"] = entry.activity_weighted_mw
            row["cumulative_mw"] = entry.cumulative_mw
            row["cumulative_excess_pct"] = (
                relative_error(entry.cumulative_mw, entry.activity_weighted_mw)
                if entry.activity_weighted_mw > 0 else None
            )
        else:
            ref = reference.for_application(entry.application)
            ref_mw = ref.reference_mw if ref is not None else None
            row["reference_mw"] = ref_mw
            row["activity_weighted_mw"] = entry.activity_weighted_mw
            row["activity_error_pct"] = relative_error(entry.activity_weighted_mw, ref_mw) if ref_mw else None
            row["cumulative_mw"] = entry.cumulative_mw
            row["cumulative_error_pct"] = relative_error(entry.cumulative_mw, ref_mw) if ref_mw else None
            row.update(_time_columns(entry.measured_time_s, ref))
        rows.append(row)
    return pd.DataFrame(rows)
