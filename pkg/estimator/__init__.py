# Package marker - power estimation from activity coefficients
from estimator.power import (
    IpPower,
    PowerBreakdown,
    PowerReport,
    cumulative_power,
    estimate_multimode_power,
    estimate_power,
    mode_powers,
    power_breakdown,
    relative_error,
)
from estimator.reports import (
    ApplicationTotals,
    breakdown_to_csv,
    compare_table,
    load_reference,
    report_to_csv,
    report_to_json,
)

__all__ = [
    "ApplicationTotals",
    "IpPower",
    "PowerBreakdown",
    "PowerReport",
    "breakdown_to_csv",
    "compare_table",
    "cumulative_power",
    "estimate_multimode_power",
    "estimate_power",
    "load_reference",
    "mode_powers",
    "power_breakdown",
    "relative_error",
    "report_to_csv",
    "report_to_json",
]
