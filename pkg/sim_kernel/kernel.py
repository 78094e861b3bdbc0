"""
===============================================================================
MODULE: kernel.py
===============================================================================

PURPOSE:
    Discrete-event execution of a SystemModel on simpy. Each IP instance is
    a simpy process; channels are bounded stores; the activity trace records
    [consume, consume + latency) for every token batch an IP processes.

WHEN TO USE THIS MODULE:
    - After build_system(): run an application to its stop condition
    - In tests: compare the trace against a per-cycle stepper

USAGE EXAMPLES:
    from sim_kernel.kernel import StopCondition, simulate

    result = simulate(system, StopCondition(sink_tokens=70), seed=2016)
    alphas = result.alphas()

EXECUTION MODEL:
    1. One time unit is one clock cycle of the system's single clock domain
    2. A block consumes one token per input port (read in port order) when
       its previous consumption is at least II cycles back and it has a
       free pipeline slot (ceil(latency / II) slots)
    3. Outputs are written latency cycles later, in consumption order; an
       output blocked by a full channel keeps its slot (back-pressure)
    4. Same-cycle events run in scheduling order: processes start in
       instance declaration order, and simpy dispatches simultaneous events
       first-in first-out, so runs are reproducible

STOP CONDITIONS:
    - StopCondition(cycles=n): run until cycle n
    - StopCondition(sink_tokens=n): run until every sink holds n tokens;
      an empty event queue before that is a deadlock

TROUBLESHOOTING:
    - DeadlockError lists what each stuck instance waits on; a channel
      shown as "writing" with a downstream instance "reading" elsewhere
      usually points at a capacity or wiring problem
    - SimulationLimitError: raise max_cycles or check the source schedule
===============================================================================
"""

import math
import time
from dataclasses import dataclass
from typing import Any, Dict, Generator, List, Mapping, Optional

import numpy as np
import simpy

from sim_kernel.blocks import BlockBehavior
from sim_kernel.topology import Channel, IpInstance, SystemModel
from sim_kernel.trace import ActivityTrace, TraceRecorder, activity_coefficients
from utils.exceptions import DeadlockError, SimulationLimitError, TopologyError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class StopCondition:
    cycles: Optional[int] = None
    sink_tokens: Optional[int] = None
    max_cycles: Optional[int] = None

    def __post_init__(self) -> None:
        if (self.cycles is None) == (self.sink_tokens is None):
            raise ValueError("StopCondition needs exactly one of cycles or sink_tokens")
        if self.cycles is not None and self.cycles < 0:
            raise ValueError(f"cycles must be >= 0, got {self.cycles}")
        if self.sink_tokens is not None and self.sink_tokens < 1:
            raise ValueError(f"sink_tokens must be >= 1, got {self.sink_tokens}")

    def describe(self) -> str:
        if self.cycles is not None:
            return f"{self.cycles} cycles"
        return f"{self.sink_tokens} tokens per sink"


@dataclass(frozen=True)
class ChannelCount:
    produced: int
    consumed: int
    occupancy: int


@dataclass
class SimulationResult:
    trace: ActivityTrace
    outputs: Dict[str, List[Any]]
    token_counts: Dict[str, ChannelCount]
    wall_time_s: float
    system_name: str = ""
    application: Optional[str] = None

    def alphas(self) -> Dict[str, float]:
        return activity_coefficients(self.trace)


class TokenChannel(simpy.Store):
    """Bounded FIFO between two ports, counting tokens in and out."""

    def __init__(self, env: simpy.Environment, channel: Channel):
        super().__init__(env, capacity=channel.capacity)
        self.channel = channel
        self.produced = 0
        self.consumed = 0

    def _do_put(self, event: Any) -> Optional[bool]:
        result = super()._do_put(event)
        if event.triggered:
            self.produced += 1
        return result

    def _do_get(self, event: Any) -> Optional[bool]:
        result = super()._do_get(event)
        if event.triggered:
            self.consumed += 1
        return result

    def count(self) -> ChannelCount:
        return ChannelCount(self.produced, self.consumed, len(self.items))


def instance_seed(seed: int, index: int) -> int:
    """Per-instance seed derived from the run seed and declaration index."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


class _Run:
    """State of one simulation run."""

    def __init__(self, system: SystemModel, stop: StopCondition, seed: int):
        self.system = system
        self.stop = stop
        self.env = simpy.Environment()
        self.channels = {ch: TokenChannel(self.env, ch) for ch in system.channels}
        self.inputs: Dict[str, Dict[str, TokenChannel]] = {i.instance_id: {} for i in system.instances}
        self.outputs: Dict[str, Dict[str, TokenChannel]] = {i.instance_id: {} for i in system.instances}
        for channel, store in self.channels.items():
            self.outputs[channel.src[0]][channel.src[1]] = store
            self.inputs[channel.dst[0]][channel.dst[1]] = store

        self.behaviors: Dict[str, BlockBehavior] = {
            inst.instance_id: inst.create_behavior(instance_seed(seed, index))
            for index, inst in enumerate(system.instances)
        }
        self.recorder = TraceRecorder(
            [i.instance_id for i in system.instances if not (i.is_source or i.is_sink)]
        )
        self.status: Dict[str, str] = {}
        self.sink_done: List[simpy.Event] = []

    # ------------------------------------------------------------------
    # processes
    # ------------------------------------------------------------------

    def _put(self, instance_id: str, port: str, token: Any) -> Generator:
        store = self.outputs[instance_id][port]
        self.status[instance_id] = f"writing {port} ({store.channel.name})"
        yield store.put(token)

    def _source(self, instance: IpInstance) -> Generator:
        behavior = self.behaviors[instance.instance_id]
        for cycle, token in behavior.schedule():
            if cycle > self.env.now:
                self.status[instance.instance_id] = f"scheduled for cycle {cycle}"
                yield self.env.timeout(cycle - self.env.now)
            for port in instance.behavior.output_ports:
                yield from self._put(instance.instance_id, port, token)
        self.status[instance.instance_id] = "finished"

    def _sink(self, instance: IpInstance, done: Optional[simpy.Event]) -> Generator:
        behavior = self.behaviors[instance.instance_id]
        quota = self.stop.sink_tokens
        received = 0
        while quota is None or received < quota:
            for port in instance.behavior.input_ports:
                store = self.inputs[instance.instance_id][port]
                self.status[instance.instance_id] = f"reading {port} ({store.channel.name})"
                token = yield store.get()
                behavior.collect(token)
                received += 1
        self.status[instance.instance_id] = "finished"
        done.succeed()

    def _block(self, instance: IpInstance) -> Generator:
        iid = instance.instance_id
        behavior = self.behaviors[iid]
        slots = simpy.Resource(self.env, capacity=instance.pipeline_depth)
        previous_done: Optional[simpy.Event] = None
        next_allowed = 0

        while True:
            if self.env.now < next_allowed:
                self.status[iid] = f"initiation interval until cycle {next_allowed}"
                yield self.env.timeout(next_allowed - self.env.now)
            self.status[iid] = "waiting for a pipeline slot"
            request = slots.request()
            yield request

            tokens: Dict[str, Any] = {}
            for port in instance.behavior.input_ports:
                store = self.inputs[iid][port]
                self.status[iid] = f"reading {port} ({store.channel.name})"
                tokens[port] = yield store.get()

            start = int(self.env.now)
            firing = behavior.fire(tokens)
            delay = 0
            if firing.active:
                delay = instance.latency_cycles
                self.recorder.record(iid, start, start + delay)
                next_allowed = start + instance.initiation_interval_cycles

            done = self.env.event()
            self.env.process(self._emit(instance, firing.outputs, delay, previous_done, done, slots, request))
            previous_done = done

    def _emit(
        self,
        instance: IpInstance,
        outputs: Mapping[str, List[Any]],
        delay: int,
        previous_done: Optional[simpy.Event],
        done: simpy.Event,
        slots: simpy.Resource,
        request: simpy.Event
    ) -> Generator:
        if delay:
            yield self.env.timeout(delay)
        if previous_done is not None:
            yield previous_done
        for port in instance.behavior.output_ports:
            for token in outputs.get(port, ()):
                yield from self._put(instance.instance_id, port, token)
        slots.release(request)
        done.succeed()

    # ------------------------------------------------------------------
    # driver
    # ------------------------------------------------------------------

    def start(self) -> Optional[simpy.Event]:
        for instance in self.system.instances:
            if instance.is_source:
                self.env.process(self._source(instance))
            elif instance.is_sink:
                done = self.env.event()
                self.sink_done.append(done)
                self.env.process(self._sink(instance, done))
            else:
                self.env.process(self._block(instance))
        if self.stop.sink_tokens is None:
            return None
        return simpy.AllOf(self.env, self.sink_done)

    def blocked(self) -> Dict[str, str]:
        return {
            iid: state for iid, state in self.status.items()
            if state.startswith(("reading", "writing", "waiting"))
        }

    def run(self) -> int:
        quota = self.start()
        if quota is None:
            if self.stop.cycles > 0:
                self.env.run(until=self.stop.cycles)
            return int(self.stop.cycles)

        while not quota.triggered:
            upcoming = self.env.peek()
            if upcoming == math.inf:
                raise DeadlockError(int(self.env.now), self.blocked())
            if self.stop.max_cycles is not None and upcoming > self.stop.max_cycles:
                raise SimulationLimitError(
                    f"{self.system.name}: sinks did not receive {self.stop.sink_tokens} tokens "
                    f"within {self.stop.max_cycles} cycles"
                )
            self.env.step()
        return int(self.env.now)


def simulate(
    system: SystemModel,
    stop: StopCondition,
    seed: int = 0,
    app: Optional[str] = None
) -> SimulationResult:
    """
    Run a system to its stop condition.

    ARGUMENTS:
        system: validated SystemModel
        stop: cycle budget or per-sink token quota
        seed: run seed; each instance gets a seed derived from it
        app: application label carried into the result

    RETURNS:
        SimulationResult: trace, sink outputs, per-channel token counts

    RAISES:
        DeadlockError: nothing left to schedule before the quota was met
        SimulationLimitError: quota not met within stop.max_cycles
    """
    if stop.sink_tokens is not None and not system.sinks:
        raise TopologyError(f"{system.name}: a token quota needs at least one sink")

    label = app or system.name
    logger.debug(f"Simulating {label} until {stop.describe()} (seed={seed})")
    started = time.perf_counter()

    run = _Run(system, stop, seed)
    t_sim = run.run()
    trace = run.recorder.finish(t_sim)

    outputs = {
        inst.instance_id: list(run.behaviors[inst.instance_id].received)
        for inst in system.sinks
    }
    token_counts = {store.channel.name: store.count() for store in run.channels.values()}
    wall_time = time.perf_counter() - started
    logger.info(f"✅ Simulated {label}: {t_sim} cycles in {wall_time:.3f} s")

    return SimulationResult(
        trace=trace,
        outputs=outputs,
        token_counts=token_counts,
        wall_time_s=wall_time,
        system_name=system.name,
        application=app,
    )
