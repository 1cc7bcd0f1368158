"""Core value types shared by the simulator: resources, tasks, nodes, config."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

# Absorb floating-point noise from repeated vector arithmetic.
_EPS = 1e-9


@dataclass(frozen=True)
class ResourceVector:
    """A (cpu cores, memory GB) quantity. Components are non-negative."""

    cpu: float = 0.0
    mem: float = 0.0

    def __post_init__(self):
        # Tiny negatives from float subtraction are clamped to zero.
        if self.cpu < 0.0:
            if self.cpu < -_EPS:
                raise ValueError(f"negative resource component cpu={self.cpu}")
            object.__setattr__(self, "cpu", 0.0)
        if self.mem < 0.0:
            if self.mem < -_EPS:
                raise ValueError(f"negative resource component mem={self.mem}")
            object.__setattr__(self, "mem", 0.0)

    def __add__(self, other: "ResourceVector") -> "ResourceVector":
        return ResourceVector(self.cpu + other.cpu, self.mem + other.mem)

    def __sub__(self, other: "ResourceVector") -> "ResourceVector":
        return ResourceVector(self.cpu - other.cpu, self.mem - other.mem)

    def scale(self, k: float) -> "ResourceVector":
        return ResourceVector(self.cpu * k, self.mem * k)

    def sub_clamped(self, other: "ResourceVector") -> "ResourceVector":
        """Component-wise subtraction, floored at zero."""
        return ResourceVector(max(0.0, self.cpu - other.cpu),
                              max(0.0, self.mem - other.mem))

    def le(self, other: "ResourceVector", tol: float = 0.0) -> bool:
        return self.cpu <= other.cpu + tol and self.mem <= other.mem + tol

    def is_zero(self) -> bool:
        return self.cpu == 0.0 and self.mem == 0.0


ZERO = ResourceVector(0.0, 0.0)


def resource_le(a: ResourceVector, b: ResourceVector) -> bool:
    """True iff a <= b in every dimension."""
    return a.le(b)


def dominant_fraction(v: ResourceVector, cap: ResourceVector) -> float:
    """Largest per-dimension fraction v/cap (the dominant resource)."""
    if cap.cpu <= 0 or cap.mem <= 0:
        raise ValueError("degenerate capacity")
    return max(v.cpu / cap.cpu, v.mem / cap.mem)


@dataclass(frozen=True)
class TaskSpec:
    """A task's static submission record: identity, timing, and request."""

    task_id: str
    job_id: str
    arrival_time: float
    duration: float
    request: ResourceVector

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"task {self.task_id}: duration must be > 0")
        if self.arrival_time < 0:
            raise ValueError(f"task {self.task_id}: negative arrival time")
        if self.request.cpu <= 0 and self.request.mem <= 0:
            raise ValueError(f"task {self.task_id}: request must be positive "
                             "in at least one dimension")


class DemandSeries:
    """Piecewise-constant per-task demand over the task lifetime.

    Samples are (offset_seconds, ResourceVector) with strictly increasing
    offsets starting at 0; the demand at offset t is the last sample at or
    before t.
    """

    __slots__ = ("task_id", "samples", "_offsets")

    def __init__(self, task_id: str, samples):
        samples = list(samples)
        if not samples:
            raise ValueError(f"task {task_id}: empty demand series")
        if samples[0][0] != 0:
            raise ValueError(f"task {task_id}: first demand offset must be 0")
        offsets = [o for o, _ in samples]
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ValueError(f"task {task_id}: demand offsets must be "
                             "strictly increasing")
        self.task_id = task_id
        self.samples = tuple((float(o), v) for o, v in samples)
        self._offsets = tuple(float(o) for o, _ in samples)

    def value_at(self, offset: float) -> ResourceVector:
        if offset < 0:
            return ZERO
        idx = bisect.bisect_right(self._offsets, offset) - 1
        return self.samples[idx][1]

    def scaled(self, factor: float) -> "DemandSeries":
        return DemandSeries(self.task_id,
                            [(o, v.scale(factor)) for o, v in self.samples])

    def __eq__(self, other):
        return (isinstance(other, DemandSeries)
                and self.task_id == other.task_id
                and self.samples == other.samples)

    def __repr__(self):
        return f"DemandSeries({self.task_id!r}, {len(self.samples)} samples)"


@dataclass
class NodeState:
    """Mutable per-node state: capacity, placed tasks, request/load tallies.

    `estimated_load` is the planning value schedulers read; the engine
    refreshes it from `measured_load` at monitor events and bumps it by each
    placed task's request in between so back-to-back placements see each
    other.
    """

    node_id: int
    capacity: ResourceVector
    placed_tasks: dict = field(default_factory=dict)  # task_id -> TaskSpec
    requested: ResourceVector = ZERO
    measured_load: ResourceVector = ZERO
    estimated_load: ResourceVector = ZERO
    job_counts: dict = field(default_factory=dict)    # job_id -> running count

    def recompute_requested(self) -> ResourceVector:
        total = ZERO
        for task in self.placed_tasks.values():
            total = total + task.request
        return total


@dataclass(frozen=True)
class ClusterConfig:
    """Cluster shape plus scheduler/controller constants."""

    n_nodes: int = 4000
    node_capacity: ResourceVector = ResourceVector(64.0, 128.0)
    theta: float = 2.0
    qos_target: float = 0.99
    per_task_qos_target: float = 1.0
    tick_seconds: float = 10.0
    monitor_interval_seconds: float = 60.0
    penalty_interval_seconds: float = 60.0
    alpha: float = 0.99
    beta: float = 1.0
    p0: float = 1.5
    p_min: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_nodes <= 0:
            raise ValueError("n_nodes must be positive")
        if self.node_capacity.cpu <= 0 or self.node_capacity.mem <= 0:
            raise ValueError("node capacity must be positive")
        if self.theta < 1:
            raise ValueError("theta must be >= 1")
        if not (0 < self.qos_target <= 1):
            raise ValueError("qos_target must be in (0, 1]")
        if not (0 < self.per_task_qos_target <= 1):
            raise ValueError("per_task_qos_target must be in (0, 1]")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must be in (0, 1)")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if not (self.p0 >= self.p_min >= 1):
            raise ValueError("require p0 >= p_min >= 1")
        for name in ("tick_seconds", "monitor_interval_seconds",
                     "penalty_interval_seconds"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
