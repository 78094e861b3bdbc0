"""
===============================================================================
MODULE: exceptions.py
===============================================================================

PURPOSE:
    Exception hierarchy shared by every package. Expected failures (bad
    input files, missing characterizations, deadlocked systems) raise one of
    these; the CLI turns them into per-application failures and exit codes.

USAGE EXAMPLES:
    from utils.exceptions import KeyNotFoundError

    try:
        record = lookup(library, key)
    except KeyNotFoundError as e:
        logger.error(f"❌ {e}")
===============================================================================
"""

from typing import Any, Dict, Optional, Sequence


class ActisimError(Exception):
    """Base class for all expected simulator errors."""


# ============================================================================
# POWER MODEL LIBRARY
# ============================================================================

class LibraryParseError(ActisimError):
    """Library file or characterization CSV is malformed."""


class SchemaVersionError(LibraryParseError):
    """Library file declares a schema version this code does not read."""

    def __init__(self, found: Any, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"Unsupported library schema_version {found!r} (expected {expected})")


class DuplicateKeyError(ActisimError):
    """Two records share the same IpConfigKey."""

    def __init__(self, key: Any, row: Optional[int] = None):
        self.key = key
        self.row = row
        where = f" (CSV row {row})" if row is not None else ""
        super().__init__(f"Duplicate power record for {key}{where}")


class KeyNotFoundError(ActisimError, KeyError):
    """No record matches the requested configuration."""

    def __init__(self, key: Any):
        self.key = key
        super().__init__(f"No power record for {key}; characterize this configuration first")

    def __str__(self) -> str:
        return self.args[0]


# ============================================================================
# SIMULATION KERNEL
# ============================================================================

class TopologyError(ActisimError):
    """System description is invalid."""


class UnknownBlockError(TopologyError):
    """Topology names a block type that is not registered."""


class DanglingEndpointError(TopologyError):
    """A channel endpoint references a missing instance or port."""


class UnresolvedKeyError(TopologyError):
    """An instance's config key is absent from the power library."""

    def __init__(self, key: Any, owner: str):
        self.key = key
        self.owner = owner
        super().__init__(f"{owner}: configuration {key} is not in the power library")


class DeadlockError(ActisimError):
    """No event is schedulable and the stop condition is not met."""

    def __init__(self, cycle: int, blocked: Dict[str, str]):
        self.cycle = cycle
        self.blocked = dict(blocked)
        detail = ", ".join(f"{k} ({v})" for k, v in sorted(self.blocked.items())) or "none"
        super().__init__(f"Deadlock at cycle {cycle}; blocked instances: {detail}")


class UndefinedCoefficientError(ActisimError):
    """Activity coefficients requested for a zero-length simulation."""


# ============================================================================
# BASEBAND BLOCKS
# ============================================================================

class BlockInputError(ActisimError, ValueError):
    """A DSP function was called with input violating its precondition."""


# ============================================================================
# SCENARIO / ESTIMATION / ENERGY EFFICIENCY
# ============================================================================

class ScenarioError(ActisimError):
    """Scenario file is malformed or inconsistent."""


class EstimationError(ActisimError, ValueError):
    """Power estimation inputs are inconsistent."""

    def __init__(self, message: str, instances: Sequence[str] = ()):
        self.instances = tuple(instances)
        super().__init__(message)


class EnergyEfficiencyError(ActisimError, ValueError):
    """Energy-efficiency inputs are invalid."""


class SimulationLimitError(ActisimError):
    """Output quota not reached within the configured cycle cap."""


class ManifestError(ActisimError):
    """Run manifest is missing or malformed."""
