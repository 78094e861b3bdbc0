"""
===============================================================================
MODULE: topology.py
===============================================================================

PURPOSE:
    Parses system descriptions (IP instances connected by token channels)
    and validates them into a SystemModel the kernel can execute.

USAGE EXAMPLES:
    from sim_kernel.topology import build_system, load_topology

    system = build_system(load_topology("out/app1/topology.json"),
                          library=library)

TOPOLOGY FILE:
    {
      "name": "lte_tx",
      "clock_mhz": 50,
      "instances": [{"instance_id", "block_type", "parameters",
                     "latency_cycles", "initiation_interval_cycles"}],
      "channels": [{"src": "coder.out", "dst": "mapper.in", "capacity": 16}]
    }
    Endpoints may also be written ["coder", "out"].

WHAT THIS MODULE DOES:
    1. Validates the description with pydantic
    2. Resolves block types against the registry
    3. Checks every port is wired exactly once and every endpoint exists
    4. Checks every instance lies on a source-to-sink path
    5. Derives each instance's IpConfigKey and, given a library, resolves it
===============================================================================
"""

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Type, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from power_model_library.models import IpConfigKey, PowerLibrary
from sim_kernel.blocks import BlockBehavior, BlockRegistry, SinkBehavior, SourceBehavior, default_registry
from utils.exceptions import DanglingEndpointError, TopologyError, UnresolvedKeyError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

DEFAULT_CHANNEL_CAPACITY = 16

Endpoint = Tuple[str, str]


# ============================================================================
# FILE SCHEMA
# ============================================================================

class InstanceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    instance_id: str = Field(min_length=1)
    block_type: str = Field(min_length=1)
    parameters: Dict[str, Any] = Field(default_factory=dict)
    latency_cycles: int = Field(default=0, ge=0)
    initiation_interval_cycles: int = Field(default=1, ge=1)
    config_key: Optional[IpConfigKey] = None
    extra_key_parameters: List[str] = Field(default_factory=list)


class ChannelSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    src: Endpoint
    dst: Endpoint
    capacity: int = Field(default=DEFAULT_CHANNEL_CAPACITY, ge=1)

    @field_validator("src", "dst", mode="before")
    @classmethod
    def _parse_endpoint(cls, value: Any) -> Any:
        if isinstance(value, str):
            if "." not in value:
                raise ValueError(f"endpoint {value!r} must look like 'instance.port'")
            instance_id, port = value.rsplit(".", 1)
            return instance_id, port
        if isinstance(value, Mapping):
            return value.get("instance_id"), value.get("port")
        return value


class TopologyDescription(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "system"
    clock_mhz: float = Field(default=50.0, gt=0)
    instances: List[InstanceSpec]
    channels: List[ChannelSpec] = Field(default_factory=list)


def parse_topology(document: Any) -> TopologyDescription:
    if isinstance(document, TopologyDescription):
        return document
    try:
        return TopologyDescription.model_validate(document)
    except ValidationError as e:
        raise TopologyError(f"Invalid topology description: {e}") from e


def load_topology(path: Union[str, Path]) -> TopologyDescription:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise TopologyError(f"Topology file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise TopologyError(f"{path}: invalid JSON ({e})") from e
    return parse_topology(document)


def save_topology(description: TopologyDescription, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = description.model_dump(mode="json", exclude_defaults=False)
    for channel in document["channels"]:
        channel["src"] = ".".join(channel["src"])
        channel["dst"] = ".".join(channel["dst"])
    path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    return path


# ============================================================================
# VALIDATED MODEL
# ============================================================================

@dataclass(frozen=True, eq=False)
class IpInstance:
    instance_id: str
    block_type: str
    behavior: Type[BlockBehavior]
    parameters: Mapping[str, Any]
    config_key: Optional[IpConfigKey]
    latency_cycles: int
    initiation_interval_cycles: int

    @property
    def characterized(self) -> bool:
        return self.behavior.characterized

    @property
    def is_source(self) -> bool:
        return issubclass(self.behavior, SourceBehavior)

    @property
    def is_sink(self) -> bool:
        return issubclass(self.behavior, SinkBehavior)

    @property
    def pipeline_depth(self) -> int:
        """Token batches in flight at once."""
        return max(1, math.ceil(self.latency_cycles / self.initiation_interval_cycles))

    def create_behavior(self, seed: int) -> BlockBehavior:
        return self.behavior(self.parameters, seed)


@dataclass(frozen=True)
class Channel:
    src: Endpoint
    dst: Endpoint
    capacity: int = DEFAULT_CHANNEL_CAPACITY

    @property
    def name(self) -> str:
        return f"{self.src[0]}.{self.src[1]}->{self.dst[0]}.{self.dst[1]}"


@dataclass(frozen=True)
class SystemModel:
    name: str
    instances: Tuple[IpInstance, ...]
    channels: Tuple[Channel, ...]
    clock_mhz: float
    _by_id: Dict[str, IpInstance] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._by_id.update({inst.instance_id: inst for inst in self.instances})

    def instance(self, instance_id: str) -> IpInstance:
        return self._by_id[instance_id]

    def instance_ids(self) -> List[str]:
        return [inst.instance_id for inst in self.instances]

    @property
    def sources(self) -> List[IpInstance]:
        return [inst for inst in self.instances if inst.is_source]

    @property
    def sinks(self) -> List[IpInstance]:
        return [inst for inst in self.instances if inst.is_sink]

    def characterized_instances(self) -> List[IpInstance]:
        return [inst for inst in self.instances if inst.characterized]

    def config_keys(self) -> Dict[str, IpConfigKey]:
        return {inst.instance_id: inst.config_key for inst in self.characterized_instances()}


# ============================================================================
# BUILD
# ============================================================================

def _check_wiring(instances: Dict[str, IpInstance], channels: Sequence[Channel]) -> None:
    driven: Dict[Endpoint, str] = {}
    used_outputs: Dict[Endpoint, str] = {}

    for channel in channels:
        for end, ports_attr, role in ((channel.src, "output_ports", "source"), (channel.dst, "input_ports", "destination")):
            instance_id, port = end
            if instance_id not in instances:
                raise DanglingEndpointError(
                    f"Channel {channel.name}: {role} instance {instance_id!r} is not declared"
                )
            ports = getattr(instances[instance_id].behavior, ports_attr)
            if port not in ports:
                raise DanglingEndpointError(
                    f"Channel {channel.name}: {instance_id!r} has no {role} port {port!r} "
                    f"(available: {', '.join(ports) or 'none'})"
                )
        if channel.dst in driven:
            raise TopologyError(f"Input {'.'.join(channel.dst)} is driven by two channels")
        if channel.src in used_outputs:
            raise TopologyError(f"Output {'.'.join(channel.src)} feeds two channels")
        driven[channel.dst] = channel.name
        used_outputs[channel.src] = channel.name

    for instance in instances.values():
        for port in instance.behavior.input_ports:
            if (instance.instance_id, port) not in driven:
                raise TopologyError(f"Input {instance.instance_id}.{port} is not connected")
        for port in instance.behavior.output_ports:
            if (instance.instance_id, port) not in used_outputs:
                raise TopologyError(f"Output {instance.instance_id}.{port} is not connected")


def _check_connectivity(instances: Dict[str, IpInstance], channels: Sequence[Channel]) -> None:
    forward: Dict[str, List[str]] = {name: [] for name in instances}
    backward: Dict[str, List[str]] = {name: [] for name in instances}
    for channel in channels:
        forward[channel.src[0]].append(channel.dst[0])
        backward[channel.dst[0]].append(channel.src[0])

    def reach(starts: List[str], edges: Dict[str, List[str]]) -> set:
        seen = set(starts)
        queue = deque(starts)
        while queue:
            for nxt in edges[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    sources = [name for name, inst in instances.items() if inst.is_source]
    sinks = [name for name, inst in instances.items() if inst.is_sink]
    if not sources:
        raise TopologyError("System has no source instance")
    if not sinks:
        raise TopologyError("System has no sink instance")

    fed = reach(sources, forward)
    drained = reach(sinks, backward)
    stranded = sorted(name for name in instances if name not in fed or name not in drained)
    if stranded:
        raise TopologyError(f"Instances not on a source-to-sink path: {', '.join(stranded)}")


def build_system(
    topology: Union[TopologyDescription, Mapping[str, Any]],
    registry: Optional[BlockRegistry] = None,
    library: Optional[PowerLibrary] = None
) -> SystemModel:
    """
    Validate a topology description into a SystemModel.

    ARGUMENTS:
        topology: parsed description or raw dict
        registry: block registry (default: generic + LTE blocks)
        library: when given, every characterized instance's key must resolve

    RAISES:
        UnknownBlockError: unregistered block type
        DanglingEndpointError: channel endpoint names a missing instance/port
        UnresolvedKeyError: config key absent from the library
        TopologyError: any other structural problem
    """
    description = parse_topology(topology)
    registry = registry or default_registry()

    instances: Dict[str, IpInstance] = {}
    for spec in description.instances:
        if spec.instance_id in instances:
            raise TopologyError(f"Instance id {spec.instance_id!r} declared twice")
        behavior = registry.get(spec.block_type)
        key = spec.config_key
        if key is None:
            key = behavior.config_key(spec.parameters, description.clock_mhz, spec.extra_key_parameters)
        elif not behavior.characterized:
            key = None
        instances[spec.instance_id] = IpInstance(
            instance_id=spec.instance_id,
            block_type=spec.block_type,
            behavior=behavior,
            parameters=dict(spec.parameters),
            config_key=key,
            latency_cycles=spec.latency_cycles,
            initiation_interval_cycles=spec.initiation_interval_cycles,
        )

    channels = tuple(Channel(src=c.src, dst=c.dst, capacity=c.capacity) for c in description.channels)
    _check_wiring(instances, channels)
    _check_connectivity(instances, channels)

    if library is not None:
        for instance in instances.values():
            if instance.config_key is not None and instance.config_key not in library:
                raise UnresolvedKeyError(instance.config_key, owner=instance.instance_id)

    system = SystemModel(
        name=description.name,
        instances=tuple(instances.values()),
        channels=channels,
        clock_mhz=description.clock_mhz,
    )
    logger.debug(f"Built system {system.name}: {len(system.instances)} instances, {len(channels)} channels")
    return system
