# Package marker - discrete-event simulation kernel
from sim_kernel.blocks import BlockBehavior, BlockRegistry, Firing, default_registry
from sim_kernel.kernel import SimulationResult, StopCondition, simulate
from sim_kernel.topology import Channel, IpInstance, SystemModel, build_system, load_topology
from sim_kernel.trace import ActivityTrace, activity_coefficients, export_trace_csv

__all__ = [
    "ActivityTrace",
    "BlockBehavior",
    "BlockRegistry",
    "Channel",
    "Firing",
    "IpInstance",
    "SimulationResult",
    "StopCondition",
    "SystemModel",
    "activity_coefficients",
    "build_system",
    "default_registry",
    "export_trace_csv",
    "load_topology",
    "simulate",
]
