"""
===============================================================================
MODULE: library.py
===============================================================================

PURPOSE:
    Loads, validates, saves and queries the power characterization library
    (the reusable output of the IP characterization stage).

WHEN TO USE THIS MODULE:
    - Before simulation: load the library the scenario will be resolved against
    - After characterization: save an enriched library for reuse

USAGE EXAMPLES:
    from power_model_library.library import load_library, lookup

    library = load_library("data/synthetic_library.json")
    record = lookup(library, IpConfigKey.of("ifft", fft_size=1024,
                                            quantization_bits=14, clock_mhz=50))

WHAT THIS MODULE DOES:
    1. Parses the JSON library file (schema_version 1)
    2. Validates every record and rejects duplicate keys
    3. Collects soft warnings (idle power above active power)
    4. Serves exact-match lookups, never nearest matches

OUTPUTS:
    - PowerLibrary objects
    - JSON library files with records sorted by key

TROUBLESHOOTING:
    - "No power record for ...": the configuration was never characterized;
      add it with import_characterization_csv
    - "Unsupported library schema_version": file written by another version

RELATED FILES:
    - power_model_library/models.py - record and key types
    - data/synthetic_library.json - bundled library
===============================================================================
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from power_model_library.models import (
    SCHEMA_VERSION,
    IpConfigKey,
    IpPowerRecord,
    PowerLibrary,
)
from utils.exceptions import LibraryParseError, SchemaVersionError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

PathLike = Union[str, Path]


class _RecordEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ip_name: str = Field(min_length=1)
    parameters: Dict[str, Union[int, float, str]] = Field(default_factory=dict)
    p_active_mw: float
    p_idle_mw: float
    fpga_part: str
    source: str = "synthetic"


class _LibraryFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int
    created_at: Optional[str] = None
    static_power_mw: Optional[float] = None
    records: List[_RecordEntry] = Field(default_factory=list)


def validate_record(record: IpPowerRecord) -> Tuple[bool, Optional[str]]:
    """
    Soft-validate a power record.

    Idle power above active power is legal (clock-tree dominated IPs can
    report near-equal values) but suspicious, so it is reported, not refused.

    RETURNS:
        Tuple[bool, Optional[str]]: (is_valid, warning_message)
    """
    if record.p_idle_mw > record.p_active_mw:
        return False, (
            f"{record.key}: p_idle_mw={record.p_idle_mw} exceeds "
            f"p_active_mw={record.p_active_mw}"
        )
    return True, None


def collect_warnings(records: Iterable[IpPowerRecord]) -> List[str]:
    warnings = []
    for record in records:
        is_valid, message = validate_record(record)
        if not is_valid:
            logger.warning(f"⚠️  {message}")
            warnings.append(message)
    return warnings


def library_from_document(document: Any, origin: str = "<memory>") -> PowerLibrary:
    """
    Build a library from an already-decoded JSON document.

    RAISES:
        SchemaVersionError: schema_version is not 1
        LibraryParseError: document does not match the schema
        DuplicateKeyError: two records share a key
    """
    if not isinstance(document, dict):
        raise LibraryParseError(f"{origin}: top-level JSON value must be an object")
    if document.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionError(document.get("schema_version"), SCHEMA_VERSION)

    try:
        parsed = _LibraryFile.model_validate(document)
        records = [IpPowerRecord.from_json_record(entry.model_dump()) for entry in parsed.records]
    except ValidationError as e:
        raise LibraryParseError(f"{origin}: {e}") from e

    extra = {}
    if parsed.created_at:
        extra["created_at"] = parsed.created_at
    return PowerLibrary(
        records=tuple(records),
        static_power_mw=parsed.static_power_mw,
        warnings=tuple(collect_warnings(records)),
        **extra,
    )


def load_library(path: PathLike) -> PowerLibrary:
    """
    Load and validate a power library file.

    ARGUMENTS:
        path (PathLike): JSON file following the library schema

    RETURNS:
        PowerLibrary: validated, immutable library

    RAISES:
        LibraryParseError: file missing, not JSON, or not the schema
        SchemaVersionError: unsupported schema_version
        DuplicateKeyError: two records with the same key
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise LibraryParseError(f"Library file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise LibraryParseError(f"{path}: invalid JSON ({e})") from e

    library = library_from_document(document, origin=str(path))
    logger.info(f"✅ Loaded power library {path} ({len(library)} records)")
    return library


def library_to_document(library: PowerLibrary) -> Dict[str, Any]:
    records = sorted(library.records, key=lambda r: r.key.sort_key())
    document: Dict[str, Any] = {
        "schema_version": library.schema_version,
        "created_at": library.created_at,
    }
    if library.static_power_mw is not None:
        document["static_power_mw"] = library.static_power_mw
    document["records"] = [record.to_json_record() for record in records]
    return document


def save_library(library: PowerLibrary, path: PathLike) -> Path:
    """
    Write a library to disk (records sorted by key, stable bytes).

    RETURNS:
        Path: the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(library_to_document(library), indent=2) + "\n", encoding="utf-8")
    logger.info(f"💾 Saved power library {path} ({len(library)} records)")
    return path


def lookup(library: PowerLibrary, key: IpConfigKey) -> IpPowerRecord:
    """
    Exact-match lookup.

    RAISES:
        KeyNotFoundError: no record with this key (no nearest-match fallback)
    """
    return library.get(key)


def records_for_modes(
    library: PowerLibrary,
    key: IpConfigKey,
    modes: Iterable[str]
) -> Dict[str, IpPowerRecord]:
    """
    Gather per-mode records of one configuration.

    A mode record shares the configuration's parameters plus `mode=<name>`.
    The base (mode-less) record provides the "active" and "idle" modes.
    """
    base = library.get(key)
    collected: Dict[str, IpPowerRecord] = {}
    for mode in modes:
        if mode in ("active", "idle"):
            collected[mode] = base
            continue
        mode_key = IpConfigKey(ip_name=key.ip_name, parameters={**key.as_dict(), "mode": mode})
        collected[mode] = library.get(mode_key)
    return collected