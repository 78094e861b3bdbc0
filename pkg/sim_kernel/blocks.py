"""
===============================================================================
MODULE: blocks.py
===============================================================================

PURPOSE:
    Behavioral model interface executed by the simulation kernel, the generic
    stimulus/monitor blocks, and the registry mapping block type names to
    implementations.

USAGE EXAMPLES:
    from sim_kernel.blocks import BlockBehavior, Firing, default_registry

    class Doubler(BlockBehavior):
        block_type = "doubler"
        def fire(self, inputs):
            return Firing({"out": [inputs["in"] * 2]})

    registry = default_registry()
    registry.register(Doubler)

WHAT THIS MODULE DOES:
    1. Defines BlockBehavior (data path + activity predicate)
    2. Defines SourceBehavior / SinkBehavior (testbench side, no power record)
    3. Provides token_source, relay and token_sink generic blocks
    4. Holds the BlockRegistry used by build_system

NOTES:
    - A behavior instance is created per simulation run, so behaviors may
      keep per-run state (sources, sinks) without leaking between runs.
    - Firing.active=False is the activity predicate hook: the token is
      forwarded without latency and the instance stays idle.
===============================================================================
"""

from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Type

from power_model_library.models import IpConfigKey
from utils.exceptions import TopologyError, UnknownBlockError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)


@dataclass
class Firing:
    """Result of processing one token batch."""

    outputs: Dict[str, List[Any]] = field(default_factory=dict)
    active: bool = True


class BlockBehavior:
    """
    Behavioral model of one IP core.

    Subclasses set the class attributes and implement fire(). Parameters are
    the instance's topology parameters; seed is a per-instance integer
    derived from the run seed.
    """

    block_type: ClassVar[str] = ""
    input_ports: ClassVar[Tuple[str, ...]] = ("in",)
    output_ports: ClassVar[Tuple[str, ...]] = ("out",)
    characterized: ClassVar[bool] = True
    # Topology parameters that identify the characterized configuration
    key_parameters: ClassVar[Tuple[str, ...]] = ()

    def __init__(self, parameters: Optional[Mapping[str, Any]] = None, seed: int = 0):
        self.parameters = dict(parameters or {})
        self.seed = seed

    @classmethod
    def ip_name(cls) -> str:
        return cls.block_type

    @classmethod
    def config_key(
        cls,
        parameters: Mapping[str, Any],
        clock_mhz: float,
        extra_key_parameters: Sequence[str] = ()
    ) -> Optional[IpConfigKey]:
        """
        Derive the power-library key of an instance.

        RAISES:
            TopologyError: a key parameter is missing from the instance
        """
        if not cls.characterized:
            return None
        values: Dict[str, Any] = {}
        for name in tuple(cls.key_parameters) + tuple(extra_key_parameters):
            if name not in parameters:
                raise TopologyError(f"{cls.block_type}: key parameter {name!r} missing")
            values[name] = parameters[name]
        values["clock_mhz"] = clock_mhz
        return IpConfigKey.from_mapping(cls.ip_name(), values)

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        raise NotImplementedError


class SourceBehavior(BlockBehavior):
    """Stimulus generator: emits tokens on its own schedule."""

    input_ports: ClassVar[Tuple[str, ...]] = ()
    characterized: ClassVar[bool] = False

    def schedule(self) -> Iterator[Tuple[int, Any]]:
        """Yield (cycle, token) pairs with non-decreasing cycles."""
        raise NotImplementedError

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        raise TopologyError(f"{self.block_type} is a source and cannot fire")


class SinkBehavior(BlockBehavior):
    """Output monitor: collects tokens for functional validation."""

    output_ports: ClassVar[Tuple[str, ...]] = ()
    characterized: ClassVar[bool] = False

    def __init__(self, parameters: Optional[Mapping[str, Any]] = None, seed: int = 0):
        super().__init__(parameters, seed)
        self.received: List[Any] = []

    def collect(self, token: Any) -> None:
        self.received.append(token)

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        self.collect(inputs["in"])
        return Firing(active=False)


# ============================================================================
# GENERIC BLOCKS
# ============================================================================

class TokenSource(SourceBehavior):
    """
    Emits integer tokens 0..count-1.

    Parameters: `times` (explicit emission cycles) or `count`, `interval`
    (default 1) and `start` (default 0).
    """

    block_type = "token_source"

    def schedule(self) -> Iterator[Tuple[int, Any]]:
        times = self.parameters.get("times")
        if times is None:
            count = int(self.parameters.get("count", 0))
            interval = int(self.parameters.get("interval", 1))
            start = int(self.parameters.get("start", 0))
            times = [start + i * interval for i in range(count)]
        for index, cycle in enumerate(sorted(int(t) for t in times)):
            yield cycle, index


class Relay(BlockBehavior):
    """Forwards each token unchanged; active for its full latency."""

    block_type = "relay"

    def fire(self, inputs: Dict[str, Any]) -> Firing:
        return Firing({"out": [inputs["in"]]})


class TokenSink(SinkBehavior):
    block_type = "token_sink"


# ============================================================================
# REGISTRY
# ============================================================================

class BlockRegistry:
    """Maps block type names to behavior classes."""

    def __init__(self, behaviors: Sequence[Type[BlockBehavior]] = ()):
        self._behaviors: Dict[str, Type[BlockBehavior]] = {}
        for behavior in behaviors:
            self.register(behavior)

    def register(self, behavior: Type[BlockBehavior]) -> Type[BlockBehavior]:
        if not behavior.block_type:
            raise TopologyError(f"{behavior.__name__} has no block_type")
        self._behaviors[behavior.block_type] = behavior
        return behavior

    def get(self, block_type: str) -> Type[BlockBehavior]:
        try:
            return self._behaviors[block_type]
        except KeyError:
            known = ", ".join(sorted(self._behaviors))
            raise UnknownBlockError(f"Unknown block type {block_type!r} (registered: {known})") from None

    def __contains__(self, block_type: str) -> bool:
        return block_type in self._behaviors

    def names(self) -> List[str]:
        return sorted(self._behaviors)


GENERIC_BLOCKS: Tuple[Type[BlockBehavior], ...] = (TokenSource, Relay, TokenSink)


def default_registry() -> BlockRegistry:
    """Registry with the generic blocks and the LTE baseband blocks."""
    from lte_baseband.blocks import LTE_BLOCKS

    return BlockRegistry(GENERIC_BLOCKS + LTE_BLOCKS)