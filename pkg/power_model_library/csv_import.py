"""
===============================================================================
MODULE: csv_import.py
===============================================================================

PURPOSE:
    Ingests characterization results exported by gate-level power tools
    (one row per IP configuration) into a power library.

USAGE EXAMPLES:
    from power_model_library.csv_import import import_characterization_csv

    library = import_characterization_csv("data/characterization_example.csv",
                                          PowerLibrary())

CSV CONTRACT:
    header: ip_name,parameters,p_active_mw,p_idle_mw,fpga_part,source
    parameters: k=v;k=v (values are integers or strings)

WHAT THIS MODULE DOES:
    1. Reads the CSV with pandas (all columns as text)
    2. Converts each row to an IpPowerRecord
    3. Rejects keys already present (in the library or earlier in the file)
    4. Returns a NEW library; the input library is never modified

NOTES:
    - Import is all-or-nothing: the first bad row aborts the whole file
    - Row numbers in errors are file line numbers (the header is line 1)
===============================================================================
"""

from pathlib import Path
from typing import List, Union

import pandas as pd
from pydantic import ValidationError

from power_model_library.library import collect_warnings
from power_model_library.models import IpConfigKey, IpPowerRecord, PowerLibrary
from utils.exceptions import DuplicateKeyError, LibraryParseError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

CSV_COLUMNS = ["ip_name", "parameters", "p_active_mw", "p_idle_mw", "fpga_part", "source"]


def read_characterization_csv(path: Union[str, Path]) -> List[IpPowerRecord]:
    """
    Parse a characterization CSV into records (no duplicate checks).

    RAISES:
        LibraryParseError: missing file, wrong header, or malformed row
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as e:
        raise LibraryParseError(f"CSV file not found: {path}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise LibraryParseError(f"{path}: {e}") from e

    if list(frame.columns) != CSV_COLUMNS:
        raise LibraryParseError(
            f"{path}: header must be {','.join(CSV_COLUMNS)}, got {','.join(frame.columns)}"
        )

    records = []
    for index, row in enumerate(frame.itertuples(index=False)):
        line = index + 2
        try:
            key = IpConfigKey.from_mapping(row.ip_name.strip(), IpConfigKey.parse_parameters(row.parameters))
            records.append(IpPowerRecord(
                key=key,
                p_active_mw=float(row.p_active_mw),
                p_idle_mw=float(row.p_idle_mw),
                fpga_part=row.fpga_part.strip(),
                source=row.source.strip() or "synthetic",
            ))
        except (ValueError, ValidationError) as e:
            raise LibraryParseError(f"{path}: CSV row {line}: {e}") from e
    return records


def import_characterization_csv(path: Union[str, Path], library: PowerLibrary) -> PowerLibrary:
    """
    Import a characterization CSV into a copy of `library`.

    ARGUMENTS:
        path: CSV file following the column contract
        library: existing library (left unchanged)

    RETURNS:
        PowerLibrary: prior records plus the imported ones

    RAISES:
        LibraryParseError: malformed file or row
        DuplicateKeyError: a row repeats an existing key (names the row)
    """
    records = read_characterization_csv(path)

    seen = set(library.keys())
    for index, record in enumerate(records):
        if record.key in seen:
            raise DuplicateKeyError(record.key, row=index + 2)
        seen.add(record.key)

    warnings = collect_warnings(records)
    imported = library.with_records(records, warnings=warnings)
    logger.info(f"✅ Imported {len(records)} records from {path} ({len(warnings)} warnings)")
    return imported
