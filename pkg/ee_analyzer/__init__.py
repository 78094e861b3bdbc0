# Package marker - capacity and energy-efficiency study
from ee_analyzer.models import (
    EeCurve,
    EeParams,
    EePoint,
    EeStudyConfig,
    FadingSamples,
    dbm_to_watt,
    load_ee_params,
    watt_to_dbm,
)
from ee_analyzer.capacity import (
    average_capacity,
    curves_to_csv,
    ee_sweep,
    energy_efficiency,
    parse_pt_range,
    sample_channel,
)

__all__ = [
    "EeCurve",
    "EeParams",
    "EePoint",
    "EeStudyConfig",
    "FadingSamples",
    "average_capacity",
    "curves_to_csv",
    "dbm_to_watt",
    "ee_sweep",
    "energy_efficiency",
    "load_ee_params",
    "parse_pt_range",
    "sample_channel",
    "watt_to_dbm",
]
