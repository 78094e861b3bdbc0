"""
===============================================================================
MODULE: trace.py
===============================================================================

PURPOSE:
    Activity trace of a simulation run: per-instance half-open active
    intervals [t_start, t_end) in cycles, and the time-activity coefficients
    derived from them.

USAGE EXAMPLES:
    from sim_kernel.trace import activity_coefficients, export_trace_csv

    alphas = activity_coefficients(result.trace)
    export_trace_csv(result.trace, "out/app1/trace.csv", alphas)

NOTES:
    - Intervals are stored merged: overlapping or touching intervals of one
      instance collapse into one, so lists stay disjoint and sorted.
    - Time stays in integer cycles; to_seconds() is for reporting only.
===============================================================================
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import pandas as pd

from utils.exceptions import UndefinedCoefficientError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

Interval = Tuple[int, int]

TRACE_COLUMNS = ["instance_id", "t_start_cycles", "t_end_cycles"]


@dataclass(frozen=True)
class ActivityTrace:
    intervals: Mapping[str, Tuple[Interval, ...]]
    t_sim_cycles: int

    def instance_ids(self) -> List[str]:
        return list(self.intervals)

    def active_cycles(self, instance_id: str) -> int:
        return sum(end - start for start, end in self.intervals[instance_id])

    def clipped(self, t_end: int) -> "ActivityTrace":
        """Prefix of this trace up to cycle t_end."""
        t_end = min(t_end, self.t_sim_cycles)
        return ActivityTrace(
            intervals={
                name: tuple((s, min(e, t_end)) for s, e in spans if s < t_end)
                for name, spans in self.intervals.items()
            },
            t_sim_cycles=t_end,
        )


@dataclass
class TraceRecorder:
    """Incremental interval collector used by the kernel."""

    instance_ids: Iterable[str]
    _spans: Dict[str, List[List[int]]] = field(init=False)

    def __post_init__(self) -> None:
        self._spans = {name: [] for name in self.instance_ids}

    def record(self, instance_id: str, start: int, end: int) -> None:
        if end <= start:
            return
        spans = self._spans[instance_id]
        # starts arrive in non-decreasing order per instance
        if spans and start <= spans[-1][1]:
            spans[-1][1] = max(spans[-1][1], end)
        else:
            spans.append([start, end])

    def finish(self, t_sim_cycles: int) -> ActivityTrace:
        intervals: Dict[str, Tuple[Interval, ...]] = {}
        for name, spans in self._spans.items():
            intervals[name] = tuple(
                (start, min(end, t_sim_cycles)) for start, end in spans if start < t_sim_cycles
            )
        return ActivityTrace(intervals=intervals, t_sim_cycles=t_sim_cycles)


def activity_coefficients(trace: ActivityTrace) -> Dict[str, float]:
    """
    Fraction of simulated time each instance spent active.

    RETURNS:
        Dict[str, float]: instance_id -> alpha in [0, 1]

    RAISES:
        UndefinedCoefficientError: the trace covers zero cycles
    """
    if trace.t_sim_cycles <= 0:
        raise UndefinedCoefficientError(
            f"Activity coefficients are undefined for t_sim_cycles={trace.t_sim_cycles}"
        )
    # integer numerator, single division
    return {name: trace.active_cycles(name) / trace.t_sim_cycles for name in trace.intervals}


def to_seconds(cycles: int, clock_mhz: float) -> float:
    return cycles / (clock_mhz * 1e6)


def trace_to_frame(trace: ActivityTrace, alphas: Optional[Mapping[str, float]] = None) -> pd.DataFrame:
    rows = []
    for name, spans in trace.intervals.items():
        rows.extend((name, str(start), str(end)) for start, end in spans)
    if alphas is not None:
        rows.extend((name, "alpha", repr(float(alphas[name]))) for name in trace.intervals)
    return pd.DataFrame(rows, columns=TRACE_COLUMNS, dtype=str)


def export_trace_csv(
    trace: ActivityTrace,
    path: Union[str, Path],
    alphas: Optional[Mapping[str, float]] = None
) -> Path:
    """
    Write the trace as CSV: interval rows, then one alpha row per instance.

    Summary rows carry the literal "alpha" in t_start_cycles and the
    coefficient in t_end_cycles.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if alphas is None and trace.t_sim_cycles > 0:
        alphas = activity_coefficients(trace)
    trace_to_frame(trace, alphas).to_csv(path, index=False, lineterminator="\n")
    logger.debug(f"Trace written to {path}")
    return path
