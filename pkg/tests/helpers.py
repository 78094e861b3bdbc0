"""
===============================================================================
MODULE: helpers.py
===============================================================================

PURPOSE:
    Shared constructors and brute-force oracles for the test suites.

WHAT THIS MODULE PROVIDES:
    1. make_record / make_library - power records and libraries in one line
    2. relay_chain - source -> relay x k -> sink topology documents
    3. random_relay_chain - randomized chains (latency, II, token feed,
       optionally small channel capacities)
    4. step_relay_chain - cycle-by-cycle reference simulator for relay chains
    5. per_cycle_power - energy integration over a trace, one cycle at a time
===============================================================================
"""

import math
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from power_model_library.models import IpConfigKey, IpPowerRecord, PowerLibrary
from sim_kernel.trace import ActivityTrace

RELAY_CLOCK_MHZ = 50.0


def make_record(ip_name: str, p_active_mw: float, p_idle_mw: float, **parameters: Any) -> IpPowerRecord:
    return IpPowerRecord(
        key=IpConfigKey.of(ip_name, **parameters),
        p_active_mw=p_active_mw,
        p_idle_mw=p_idle_mw,
        fpga_part="xc6vlx240t",
        source="test",
    )


def make_library(records: Sequence[IpPowerRecord], **kwargs: Any) -> PowerLibrary:
    return PowerLibrary(records=tuple(records), **kwargs)


def relay_key(instance_id: str) -> IpConfigKey:
    """Config key of a relay instance built by relay_chain (one per instance)."""
    return IpConfigKey.of("relay", clock_mhz=RELAY_CLOCK_MHZ, tag=instance_id)


def relay_chain(
    times: Sequence[int],
    latencies: Sequence[int],
    intervals: Sequence[int],
    capacity: Union[int, Sequence[int]] = 16,
    name: str = "chain"
) -> Dict[str, Any]:
    """
    Topology document: token_source -> relay_0 ... relay_{k-1} -> token_sink.

    Every relay gets a distinct config key (tag=<instance id>) so that each
    can carry its own power record. `capacity` is one value for every
    channel or one per channel, source side first.
    """
    capacities = [capacity] * (len(latencies) + 1) if isinstance(capacity, int) else list(capacity)
    instances: List[Dict[str, Any]] = [
        {"instance_id": "src", "block_type": "token_source", "parameters": {"times": list(times)}},
    ]
    channels: List[Dict[str, Any]] = []
    previous = "src"
    for index, (latency, interval) in enumerate(zip(latencies, intervals)):
        iid = f"relay_{index}"
        instances.append({
            "instance_id": iid,
            "block_type": "relay",
            "parameters": {"tag": iid},
            "latency_cycles": latency,
            "initiation_interval_cycles": interval,
            "extra_key_parameters": ["tag"],
        })
        channels.append({"src": f"{previous}.out", "dst": f"{iid}.in", "capacity": int(capacities[index])})
        previous = iid
    instances.append({"instance_id": "sink", "block_type": "token_sink"})
    channels.append({"src": f"{previous}.out", "dst": "sink.in", "capacity": int(capacities[-1])})
    return {"name": name, "clock_mhz": RELAY_CLOCK_MHZ, "instances": instances, "channels": channels}


def random_relay_chain(
    rng: np.random.Generator,
    max_relays: int = 6,
    max_cycles: int = 10_000,
    max_capacity: Optional[int] = None
) -> Tuple[Dict[str, Any], int]:
    """
    Random chain. Without max_capacity every channel can hold all tokens
    (no back-pressure); with it each channel gets a capacity in
    1..max_capacity.

    RETURNS:
        (topology document, simulated cycles)
    """
    n_relays = int(rng.integers(1, max_relays + 1))
    latencies = [int(v) for v in rng.integers(0, 40, size=n_relays)]
    intervals = [int(v) for v in rng.integers(1, 25, size=n_relays)]
    n_tokens = int(rng.integers(1, 60))
    horizon = int(rng.integers(50, max_cycles + 1))
    times = sorted(int(t) for t in rng.integers(0, horizon, size=n_tokens))
    capacity: Union[int, List[int]] = n_tokens + 1
    if max_capacity is not None:
        capacity = [int(v) for v in rng.integers(1, max_capacity + 1, size=n_relays + 1)]
    document = relay_chain(times, latencies, intervals, capacity=capacity)
    return document, horizon


def chain_arguments(document: Mapping[str, Any]) -> Dict[str, Any]:
    """step_relay_chain keyword arguments of a relay_chain document."""
    relays = [i for i in document["instances"] if i["block_type"] == "relay"]
    return {
        "times": document["instances"][0]["parameters"]["times"],
        "latencies": [r["latency_cycles"] for r in relays],
        "intervals": [r["initiation_interval_cycles"] for r in relays],
        "capacities": [c["capacity"] for c in document["channels"]],
    }


def step_relay_chain(
    times: Sequence[int],
    latencies: Sequence[int],
    intervals: Sequence[int],
    t_sim: int,
    capacities: Optional[Sequence[int]] = None
) -> Dict[str, np.ndarray]:
    """
    Reference simulator: steps one clock cycle at a time.

    Within a cycle it repeats passes over the chain until nothing moves:
    the source releases due tokens while its channel has room; each relay
    retires finished tokens downstream in order while the downstream
    channel has room (a retired token frees its pipeline slot), then starts
    at most one token when its initiation interval has elapsed and a slot
    is free. A finished token facing a full channel keeps its slot. The
    sink drains its channel within the cycle. capacities=None means
    unbounded channels.

    RETURNS:
        Dict[str, np.ndarray]: relay id -> boolean activity per cycle
    """
    n = len(latencies)
    occupancy = [0] * (n + 1)
    in_flight: List[List[int]] = [[] for _ in range(n)]
    next_allowed = [0] * n
    depth = [max(1, math.ceil(latencies[j] / intervals[j])) for j in range(n)]
    active = {f"relay_{j}": np.zeros(t_sim, dtype=bool) for j in range(n)}
    pending = sorted(times)

    def has_room(channel: int) -> bool:
        if capacities is None or channel == n:
            return True
        return occupancy[channel] < capacities[channel]

    for t in range(t_sim):
        moved = True
        while moved:
            moved = False
            while pending and pending[0] <= t and has_room(0):
                pending.pop(0)
                occupancy[0] += 1
                moved = True
            for j in range(n):
                while in_flight[j] and in_flight[j][0] <= t and has_room(j + 1):
                    in_flight[j].pop(0)
                    occupancy[j + 1] += 1
                    moved = True
                if occupancy[j] and t >= next_allowed[j] and len(in_flight[j]) < depth[j]:
                    occupancy[j] -= 1
                    next_allowed[j] = t + intervals[j]
                    in_flight[j].append(t + latencies[j])
                    active[f"relay_{j}"][t:t + latencies[j]] = True
                    moved = True
            occupancy[n] = 0
    return active


def per_cycle_power(trace: ActivityTrace, records: Mapping[str, IpPowerRecord]) -> float:
    """
    Average power by integrating instantaneous power cycle by cycle:
    p_active while inside an activity interval, p_idle otherwise.
    """
    t_sim = trace.t_sim_cycles
    energy = 0.0
    for instance_id, record in records.items():
        active = np.zeros(t_sim, dtype=bool)
        for start, end in trace.intervals[instance_id]:
            active[start:end] = True
        energy += float(np.sum(np.where(active, record.p_active_mw, record.p_idle_mw)))
    return energy / t_sim


def relay_records(document: Mapping[str, Any], rng: Optional[np.random.Generator] = None) -> Dict[str, IpPowerRecord]:
    """Random power records (p_idle <= p_active) for every relay of a chain document."""
    rng = rng or np.random.default_rng(0)
    records = {}
    for instance in document["instances"]:
        if instance["block_type"] != "relay":
            continue
        p_active = float(rng.uniform(1.0, 100.0))
        p_idle = float(rng.uniform(0.0, p_active))
        records[instance["instance_id"]] = IpPowerRecord(
            key=relay_key(instance["instance_id"]),
            p_active_mw=p_active,
            p_idle_mw=p_idle,
            fpga_part="xc6vlx240t",
            source="test",
        )
    return records
