"""
===============================================================================
MODULE: models.py
===============================================================================

PURPOSE:
    Data model of the power characterization library: configuration keys,
    per-configuration power records and the immutable library holding them.

USAGE EXAMPLES:
    from power_model_library.models import IpConfigKey, IpPowerRecord

    key = IpConfigKey.of("ifft", fft_size=1024, quantization_bits=14)
    record = IpPowerRecord(key=key, p_active_mw=40.0, p_idle_mw=5.0,
                           fpga_part="xc6vlx240t", source="synthetic")

WHAT THIS MODULE DOES:
    1. Normalizes configuration parameters so key equality ignores order
    2. Validates power values (non-negative milliwatts)
    3. Indexes records by key and rejects duplicates

RELATED FILES:
    - power_model_library/library.py - load/save/lookup
    - power_model_library/csv_import.py - characterization CSV ingestion
===============================================================================
"""

from datetime import datetime, timezone
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator

from utils.exceptions import DuplicateKeyError, KeyNotFoundError

# Library file schema understood by this code
SCHEMA_VERSION = 1

ParamValue = Union[int, str]


def normalize_parameter_value(value: Any) -> ParamValue:
    """
    Normalize a parameter value to the int-or-string domain of keys.

    Integral floats become ints (50.0 -> 50), other floats their shortest
    decimal string, booleans "true"/"false", digit strings ints.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return int(value) if value.is_integer() else repr(value)
    text = str(value).strip()
    if text.lstrip("-").isdigit():
        return int(text)
    return text


class IpConfigKey(BaseModel):
    """Identity of one characterized IP configuration."""

    model_config = ConfigDict(frozen=True)

    ip_name: str = Field(min_length=1)
    parameters: Tuple[Tuple[str, ParamValue], ...] = ()

    @field_validator("parameters", mode="before")
    @classmethod
    def _normalize_parameters(cls, value: Any) -> Tuple[Tuple[str, ParamValue], ...]:
        if value is None:
            return ()
        if isinstance(value, Mapping):
            items = list(value.items())
        else:
            items = [tuple(pair) for pair in value]
        names = [str(name) for name, _ in items]
        if len(set(names)) != len(names):
            raise ValueError(f"parameter names must be unique, got {names}")
        return tuple(sorted((str(name), normalize_parameter_value(v)) for name, v in items))

    @classmethod
    def of(cls, ip_name: str, **parameters: Any) -> "IpConfigKey":
        return cls(ip_name=ip_name, parameters=parameters)

    @classmethod
    def from_mapping(cls, ip_name: str, parameters: Mapping[str, Any]) -> "IpConfigKey":
        return cls(ip_name=ip_name, parameters=dict(parameters))

    @staticmethod
    def parse_parameters(text: str) -> Dict[str, ParamValue]:
        """Parse the CSV `k=v;k=v` encoding."""
        parsed: Dict[str, ParamValue] = {}
        if text is None:
            return parsed
        for chunk in str(text).split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "=" not in chunk:
                raise ValueError(f"malformed parameter {chunk!r}, expected k=v")
            name, raw = chunk.split("=", 1)
            name = name.strip()
            if not name:
                raise ValueError(f"malformed parameter {chunk!r}, empty name")
            if name in parsed:
                raise ValueError(f"parameter {name!r} given twice")
            parsed[name] = normalize_parameter_value(raw)
        return parsed

    def format_parameters(self) -> str:
        return ";".join(f"{name}={value}" for name, value in self.parameters)

    def as_dict(self) -> Dict[str, ParamValue]:
        return dict(self.parameters)

    def sort_key(self) -> Tuple[str, Tuple[Tuple[str, str], ...]]:
        return self.ip_name, tuple((n, str(v)) for n, v in self.parameters)

    def __str__(self) -> str:
        inner = ", ".join(f"{name}={value}" for name, value in self.parameters)
        return f"{self.ip_name}({inner})"


class IpPowerRecord(BaseModel):
    """Active/idle dynamic power of one IP configuration, in milliwatts."""

    model_config = ConfigDict(frozen=True)

    key: IpConfigKey
    p_active_mw: float = Field(ge=0)
    p_idle_mw: float = Field(ge=0)
    fpga_part: str = Field(min_length=1)
    source: str = "synthetic"

    @classmethod
    def from_json_record(cls, entry: Mapping[str, Any]) -> "IpPowerRecord":
        return cls(
            key=IpConfigKey(ip_name=entry["ip_name"], parameters=entry.get("parameters") or {}),
            p_active_mw=entry["p_active_mw"],
            p_idle_mw=entry["p_idle_mw"],
            fpga_part=entry["fpga_part"],
            source=entry.get("source", "synthetic"),
        )

    def to_json_record(self) -> Dict[str, Any]:
        return {
            "ip_name": self.key.ip_name,
            "parameters": self.key.as_dict(),
            "p_active_mw": self.p_active_mw,
            "p_idle_mw": self.p_idle_mw,
            "fpga_part": self.fpga_part,
            "source": self.source,
        }


class PowerLibrary(BaseModel):
    """
    Immutable collection of power records, indexed by configuration key.

    Safe to share between concurrent simulation runs; "mutation" returns a
    new library.
    """

    model_config = ConfigDict(frozen=True)

    records: Tuple[IpPowerRecord, ...] = ()
    schema_version: int = SCHEMA_VERSION
    created_at: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    )
    static_power_mw: Optional[float] = Field(default=None, ge=0)
    warnings: Tuple[str, ...] = ()

    _index: Dict[IpConfigKey, IpPowerRecord] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        index: Dict[IpConfigKey, IpPowerRecord] = {}
        for record in self.records:
            if record.key in index:
                raise DuplicateKeyError(record.key)
            index[record.key] = record
        self._index = index

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, key: object) -> bool:
        return key in self._index

    def get(self, key: IpConfigKey) -> IpPowerRecord:
        try:
            return self._index[key]
        except KeyError:
            raise KeyNotFoundError(key) from None

    def keys(self) -> Iterable[IpConfigKey]:
        return self._index.keys()

    def with_records(self, records: Iterable[IpPowerRecord], warnings: Iterable[str] = ()) -> "PowerLibrary":
        """Return a new library holding the current records plus `records`."""
        return PowerLibrary(
            records=self.records + tuple(records),
            schema_version=self.schema_version,
            created_at=self.created_at,
            static_power_mw=self.static_power_mw,
            warnings=self.warnings + tuple(warnings),
        )

    def same_records(self, other: "PowerLibrary") -> bool:
        """Record-set equality (ignores order and metadata)."""
        return set(self.records) == set(other.records)
