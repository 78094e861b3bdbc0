# Package marker - power characterization library (stage-1 results as data)
from power_model_library.models import IpConfigKey, IpPowerRecord, PowerLibrary
from power_model_library.library import (
    load_library,
    lookup,
    records_for_modes,
    save_library,
    validate_record,
)
from power_model_library.csv_import import import_characterization_csv

__all__ = [
    "IpConfigKey",
    "IpPowerRecord",
    "PowerLibrary",
    "import_characterization_csv",
    "load_library",
    "lookup",
    "records_for_modes",
    "save_library",
    "validate_record",
]
