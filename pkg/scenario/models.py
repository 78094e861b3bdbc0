"""
===============================================================================
MODULE: models.py
===============================================================================

PURPOSE:
    Data model of scenarios (parameter meta-models shared by several
    applications) and of the applications enumerated from them.

SCENARIO FILE:
    {
      "name": "lte_miso_2x1",
      "fixed": {"coding_rate": "1/3", "modulation": "QPSK", ...},
      "variable": {"fft_size": [256, 512, 1024, 2048]},
      "combine": "product",                      # or "zip"
      "custom_parameters": {"scrambler_seed": ["channel_coder"]},
      "fpga_part": "xc6vlx240t",
      "clock_mhz": 50,
      "stop": {"subframes": 5}                   # or {"cycles": n}
    }

RELATED FILES:
    - scenario/loader.py - parse_scenario, enumerate_applications
===============================================================================
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lte_baseband.params import OfdmParams
from power_model_library.models import IpConfigKey
from sim_kernel.topology import TopologyDescription
from utils.exceptions import UnresolvedKeyError

# Registered parameter dictionary: name -> meaning
REGISTERED_PARAMETERS: Dict[str, str] = {
    "bandwidth_mhz": "channel bandwidth in MHz (1.4, 3, 5, 10, 15, 20)",
    "fft_size": "IFFT size (128 ... 2048)",
    "modulation": "QPSK, 16QAM or 64QAM",
    "coding_rate": "channel coding rate (1/3)",
    "code_block_size": "code block size in bits (40, 1024, 6144)",
    "quantization_bits": "data path width per real component",
    "clock_mhz": "system clock in MHz",
    "cp_mode": "normal or extended cyclic prefix",
    "pilot_period": "one pilot OFDM symbol every pilot_period symbols (0 = none)",
    "tx_antennas": "transmit antennas (1 or 2)",
    "fpga_part": "target FPGA part",
}


class StopSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    subframes: Optional[int] = Field(default=None, ge=1)
    cycles: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _exactly_one(self) -> "StopSpec":
        if (self.subframes is None) == (self.cycles is None):
            raise ValueError("stop needs exactly one of 'subframes' or 'cycles'")
        return self

    def describe(self) -> str:
        if self.subframes is not None:
            return f"{self.subframes} sub-frames"
        return f"{self.cycles} cycles"


class ScenarioSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "scenario"
    fixed: Dict[str, Any] = Field(default_factory=dict)
    variable: Dict[str, List[Any]] = Field(default_factory=dict)
    combine: Literal["product", "zip"] = "product"
    custom_parameters: Dict[str, List[str]] = Field(default_factory=dict)
    fpga_part: Optional[str] = None
    clock_mhz: Optional[float] = Field(default=None, gt=0)
    stop: StopSpec = Field(default_factory=lambda: StopSpec(subframes=5))

    @field_validator("variable")
    @classmethod
    def _axes_not_empty(cls, value: Dict[str, List[Any]]) -> Dict[str, List[Any]]:
        for name, values in value.items():
            if not values:
                raise ValueError(f"variable axis {name!r} is empty")
        return value

    @model_validator(mode="after")
    def _check_names(self) -> "ScenarioSpec":
        overlap = sorted(set(self.fixed) & set(self.variable))
        if overlap:
            raise ValueError(f"parameters both fixed and variable: {', '.join(overlap)}")
        clash = sorted(set(self.custom_parameters) & set(REGISTERED_PARAMETERS))
        if clash:
            raise ValueError(f"custom parameters shadow registered ones: {', '.join(clash)}")
        known = set(REGISTERED_PARAMETERS) | set(self.custom_parameters)
        unknown = sorted((set(self.fixed) | set(self.variable)) - known)
        if unknown:
            raise ValueError(
                f"unknown parameters: {', '.join(unknown)} "
                f"(declare them under custom_parameters to pass them through)"
            )
        if self.combine == "zip":
            lengths = {len(values) for values in self.variable.values()}
            if len(lengths) > 1:
                raise ValueError(f"combine=zip needs axes of equal length, got {sorted(lengths)}")
        return self

    @property
    def axis_names(self) -> List[str]:
        return list(self.variable)

    def application_count(self) -> int:
        if not self.variable:
            return 1
        sizes = [len(values) for values in self.variable.values()]
        if self.combine == "zip":
            return sizes[0]
        count = 1
        for size in sizes:
            count *= size
        return count


@dataclass(frozen=True, eq=False)
class ApplicationSpec:
    """One full binding of a scenario's variable axes."""

    name: str
    index: int
    scenario_name: str
    bindings: Mapping[str, Any]
    parameters: Mapping[str, Any]
    ofdm: OfdmParams
    topology: TopologyDescription
    config_keys: Mapping[str, IpConfigKey]
    stop: StopSpec
    fpga_part: Optional[str] = None
    unresolved: Tuple[Tuple[str, IpConfigKey], ...] = field(default=())

    @property
    def label(self) -> str:
        if not self.bindings:
            return self.name
        return ", ".join(f"{k}={v}" for k, v in self.bindings.items())

    @property
    def clock_mhz(self) -> float:
        return float(self.parameters["clock_mhz"])

    @property
    def is_resolved(self) -> bool:
        return not self.unresolved

    def require_resolved(self) -> None:
        """
        RAISES:
            UnresolvedKeyError: first configuration missing from the library,
                naming the application and instance
        """
        if self.unresolved:
            instance_id, key = self.unresolved[0]
            raise UnresolvedKeyError(key, owner=f"{self.name}/{instance_id}")
