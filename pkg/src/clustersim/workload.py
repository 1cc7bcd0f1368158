"""Workload ingestion (two-CSV trace format) and a seeded synthetic
generator with a controllable demand/request ratio.

tasks.csv:  task_id,job_id,arrival_s,duration_s,cpu_req,mem_req
usage.csv:  task_id,offset_s,cpu_use,mem_use
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .domain import DemandSeries, ResourceVector, TaskSpec

TASKS_HEADER = ["task_id", "job_id", "arrival_s", "duration_s",
                "cpu_req", "mem_req"]
USAGE_HEADER = ["task_id", "offset_s", "cpu_use", "mem_use"]


class WorkloadError(ValueError):
    """Malformed workload input, with file/line context."""


@dataclass
class Workload:
    tasks: list = field(default_factory=list)       # list[TaskSpec]
    demands: dict = field(default_factory=dict)     # task_id -> DemandSeries

    def validate(self) -> "Workload":
        task_ids = [t.task_id for t in self.tasks]
        if len(set(task_ids)) != len(task_ids):
            raise WorkloadError("duplicate task")
        id_set = set(task_ids)
        missing = id_set - set(self.demands)
        if missing:
            raise WorkloadError(f"task without usage: {sorted(missing)[0]}")
        orphan = set(self.demands) - id_set
        if orphan:
            raise WorkloadError(f"orphan usage series: {sorted(orphan)[0]}")
        by_id = {t.task_id: t for t in self.tasks}
        for tid, series in self.demands.items():
            last_offset = series.samples[-1][0]
            if last_offset >= by_id[tid].duration:
                raise WorkloadError(
                    f"task {tid}: usage offset {last_offset} outside task "
                    f"lifetime [0, {by_id[tid].duration})")
        return self

    def scale_demands(self, factor: float) -> "Workload":
        if factor == 1.0:
            return self
        return Workload(list(self.tasks),
                        {tid: s.scaled(factor)
                         for tid, s in self.demands.items()})

    def __eq__(self, other):
        return (isinstance(other, Workload)
                and self.tasks == other.tasks
                and self.demands == other.demands)


def _parse_float(value: str, path: str, lineno: int, column: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise WorkloadError(
            f"{path}:{lineno}: non-numeric {column} value {value!r}") from None


def load_workload(tasks_path, usage_path) -> Workload:
    """Parse and cross-validate the two-CSV workload format."""
    tasks = []
    tasks_path, usage_path = str(tasks_path), str(usage_path)
    with open(tasks_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != TASKS_HEADER:
            raise WorkloadError(f"{tasks_path}:1: expected header "
                                f"{','.join(TASKS_HEADER)}")
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(TASKS_HEADER):
                raise WorkloadError(f"{tasks_path}:{lineno}: expected "
                                    f"{len(TASKS_HEADER)} fields")
            tid, jid = row[0], row[1]
            if tid in seen:
                raise WorkloadError(f"{tasks_path}:{lineno}: duplicate task "
                                    f"{tid!r}")
            seen.add(tid)
            arrival = _parse_float(row[2], tasks_path, lineno, "arrival_s")
            duration = _parse_float(row[3], tasks_path, lineno, "duration_s")
            cpu = _parse_float(row[4], tasks_path, lineno, "cpu_req")
            mem = _parse_float(row[5], tasks_path, lineno, "mem_req")
            try:
                tasks.append(TaskSpec(tid, jid, arrival, duration,
                                      ResourceVector(cpu, mem)))
            except ValueError as exc:
                raise WorkloadError(f"{tasks_path}:{lineno}: {exc}") from None

    raw_series: dict = {}
    with open(usage_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != USAGE_HEADER:
            raise WorkloadError(f"{usage_path}:1: expected header "
                                f"{','.join(USAGE_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(USAGE_HEADER):
                raise WorkloadError(f"{usage_path}:{lineno}: expected "
                                    f"{len(USAGE_HEADER)} fields")
            tid = row[0]
            if tid not in seen:
                raise WorkloadError(f"{usage_path}:{lineno}: usage row for "
                                    f"unknown task {tid!r}")
            offset = _parse_float(row[1], usage_path, lineno, "offset_s")
            cpu = _parse_float(row[2], usage_path, lineno, "cpu_use")
            mem = _parse_float(row[3], usage_path, lineno, "mem_use")
            raw_series.setdefault(tid, []).append(
                (offset, ResourceVector(cpu, mem)))

    demands = {}
    for tid, samples in raw_series.items():
        try:
            demands[tid] = DemandSeries(tid, samples)
        except ValueError as exc:
            raise WorkloadError(f"{usage_path}: {exc}") from None
    return Workload(tasks, demands).validate()


def write_workload(workload: Workload, tasks_path, usage_path) -> None:
    """Write the canonical two-CSV format (round-trips exactly)."""
    with open(tasks_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(TASKS_HEADER)
        for t in workload.tasks:
            writer.writerow([t.task_id, t.job_id, repr(t.arrival_time),
                             repr(t.duration), repr(t.request.cpu),
                             repr(t.request.mem)])
    with open(usage_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(USAGE_HEADER)
        for t in workload.tasks:
            for offset, v in workload.demands[t.task_id].samples:
                writer.writerow([t.task_id, repr(offset), repr(v.cpu),
                                 repr(v.mem)])


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of the synthetic workload generator.

    Each task draws a persistent demand/request ratio (truncated normal),
    modeling users who over- or under-estimate by a consistent margin.
    Demand per sample is request * ratio * burst, where bursts are
    occasional spikes renormalized so the mean demand/request ratio stays
    at demand_ratio_mean. Demands and requests are clipped to capacity_cap.
    """

    n_tasks: int = 1000
    arrival_rate: float = 1.0               # tasks per second
    duration_log_mean: float = 6.5          # lognormal, seconds
    duration_log_std: float = 0.5
    cpu_request_range: tuple = (2.0, 8.0)   # uniform, cores
    mem_request_range: tuple = (4.0, 16.0)  # uniform, GB
    demand_ratio_mean: float = 0.45
    demand_ratio_std: float = 0.2
    burst_prob: float = 0.05
    burst_scale: float = 3.0
    sample_interval: float = 300.0
    seed: int = 0
    tasks_per_job_mean: float = 4.0
    capacity_cap: ResourceVector = ResourceVector(64.0, 128.0)

    def __post_init__(self):
        if self.n_tasks < 0 or self.arrival_rate <= 0:
            raise ValueError("invalid arrival parameters")
        if self.duration_log_std < 0 or self.sample_interval <= 0:
            raise ValueError("invalid duration/sampling parameters")
        for lo, hi in (self.cpu_request_range, self.mem_request_range):
            if not (0 <= lo <= hi):
                raise ValueError("invalid request range")
        if self.demand_ratio_mean < 0 or self.demand_ratio_std < 0:
            raise ValueError("invalid demand ratio parameters")
        if not (0 <= self.burst_prob <= 1) or self.burst_scale < 1:
            raise ValueError("invalid burst parameters")
        if self.tasks_per_job_mean < 1:
            raise ValueError("tasks_per_job_mean must be >= 1")


def generate_synthetic(spec: SyntheticSpec) -> Workload:
    """Deterministic synthetic workload for a given spec (seed included)."""
    rng = np.random.default_rng(spec.seed)
    cap = spec.capacity_cap
    # Expected burst multiplier, divided back out to hold the ratio target.
    burst_norm = 1.0 + spec.burst_prob * (spec.burst_scale - 1.0)

    tasks = []
    demands = {}
    t = 0.0
    job_idx = 0
    left_in_job = 0
    for i in range(spec.n_tasks):
        if left_in_job == 0:
            job_idx += 1
            left_in_job = int(rng.geometric(1.0 / spec.tasks_per_job_mean))
        left_in_job -= 1

        t += rng.exponential(1.0 / spec.arrival_rate)
        duration = float(rng.lognormal(spec.duration_log_mean,
                                       spec.duration_log_std))
        duration = max(duration, 1.0)
        req = ResourceVector(
            min(float(rng.uniform(*spec.cpu_request_range)), cap.cpu),
            min(float(rng.uniform(*spec.mem_request_range)), cap.mem))
        tid = f"t{i:06d}"
        task = TaskSpec(tid, f"j{job_idx:05d}", t, duration, req)

        ratio = max(0.0, float(rng.normal(spec.demand_ratio_mean,
                                          spec.demand_ratio_std)))
        n_samples = int(duration // spec.sample_interval) + 1
        samples = []
        for k in range(n_samples):
            burst = spec.burst_scale if rng.random() < spec.burst_prob else 1.0
            factor = ratio * burst / burst_norm
            d = ResourceVector(min(req.cpu * factor, cap.cpu),
                               min(req.mem * factor, cap.mem))
            samples.append((k * spec.sample_interval, d))
        tasks.append(task)
        demands[tid] = DemandSeries(tid, samples)

    return Workload(tasks, demands).validate()
