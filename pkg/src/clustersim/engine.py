"""Discrete-time simulation loop.

Per tick: admit arrivals, run the selected scheduler over the eligible
queue entries, refresh load estimates at the monitor cadence, allocate each
node's capacity among its tasks, sample QoS, update the estimation penalty
(usage-based schedulers only), complete finished tasks, and append a
metrics record.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass

from .allocation import _allocate_dim
from .domain import (ClusterConfig, NodeState, ResourceVector, ZERO,
                     dominant_fraction, resource_le)
from .estimation import PenaltyController
from .schedulers import (DEFAULT_LOAD_WEIGHT, DEFAULT_SPREAD_WEIGHT,
                         PendingQueue, SCHEDULER_NAMES, remove_task,
                         schedule_fifo, schedule_flex, schedule_leastfit,
                         schedule_lrf)
from .workload import Workload

# Matches the comparison slack used by qos.task_qos.
_QOS_TOL = 1e-9

METRICS_COLUMNS = [
    "time_s", "total_req_cpu", "total_req_mem", "total_use_cpu",
    "total_use_mem", "cluster_q", "penalty_p", "max_load_frac",
    "std_over_mean_cpu", "std_over_mean_mem", "n_running", "n_pending",
    "violated",
]

SUMMARY_COLUMNS = [
    "n_nodes", "node_cpu", "node_mem", "ticks",
    "avg_norm_req_cpu", "avg_norm_req_mem",
    "avg_norm_use_cpu", "avg_norm_use_mem",
    "violation_frac", "mean_penalty", "max_penalty",
    "median_std_over_mean_cpu", "median_std_over_mean_mem",
    "admitted_tasks", "unschedulable_tasks", "mean_pending_delay_s",
]


@dataclass(frozen=True)
class TickMetrics:
    time_s: float
    total_req: ResourceVector
    total_use: ResourceVector
    cluster_q: float
    penalty_p: float
    max_load_frac: float
    std_over_mean_cpu: float
    std_over_mean_mem: float
    n_running: int
    n_pending: int
    violated: bool


@dataclass(frozen=True)
class SummaryReport:
    n_nodes: int
    node_capacity: ResourceVector
    ticks: int
    avg_norm_req_cpu: float
    avg_norm_req_mem: float
    avg_norm_use_cpu: float
    avg_norm_use_mem: float
    violation_frac: float
    mean_penalty: float
    max_penalty: float
    median_std_over_mean_cpu: float
    median_std_over_mean_mem: float
    admitted_tasks: int
    unschedulable_tasks: int
    mean_pending_delay_s: float


def _std_over_mean(values) -> float:
    mean = sum(values) / len(values)
    if mean <= 0:
        return 0.0
    return statistics.pstdev(values) / mean


@dataclass
class _Running:
    task: object
    node_id: int
    start_time: float


class Simulator:
    """One simulation run; not re-entrant, build a fresh instance per run."""

    def __init__(self, config: ClusterConfig, workload: Workload,
                 scheduler: str = "flexf", horizon_s: float | None = None,
                 load_weight: float = DEFAULT_LOAD_WEIGHT,
                 spread_weight: float = DEFAULT_SPREAD_WEIGHT):
        if scheduler not in SCHEDULER_NAMES:
            raise ValueError(f"unknown scheduler {scheduler!r}; choose from "
                             f"{'|'.join(SCHEDULER_NAMES)}")
        self.config = config
        self.scheduler = scheduler
        self.horizon_s = horizon_s
        self.load_weight = load_weight
        self.spread_weight = spread_weight

        workload.validate()
        self.arrivals = sorted(workload.tasks,
                               key=lambda t: (t.arrival_time, t.task_id))
        self.demands = workload.demands
        self.nodes = [NodeState(i, config.node_capacity)
                      for i in range(config.n_nodes)]
        queue_kind = "priority" if scheduler in ("lrf", "flexl") else "fifo"
        self.queue = PendingQueue(queue_kind)
        self.controller = None
        if scheduler in ("flexf", "flexl"):
            self.controller = PenaltyController(
                p=config.p0, p_min=config.p_min, alpha=config.alpha,
                beta=config.beta, rho=config.qos_target)

        # Schedulers without oversubscription admit only up to C.
        self._admission_cap = (config.node_capacity.scale(config.theta)
                               if scheduler in ("leastfit", "oversub")
                               else config.node_capacity)

        self.running: dict = {}          # task_id -> _Running
        self.last_realized = [ZERO] * config.n_nodes
        self.unschedulable: list = []
        self.admitted = 0
        self.pending_delays: list = []
        self.metrics: list = []

        tick = config.tick_seconds
        self._monitor_every = max(1, round(config.monitor_interval_seconds / tick))
        self._penalty_every = max(1, round(config.penalty_interval_seconds / tick))
        self._arrival_idx = 0

    # -- tick phases ---------------------------------------------------------

    def _admit_arrivals(self, now: float) -> None:
        while (self._arrival_idx < len(self.arrivals)
               and self.arrivals[self._arrival_idx].arrival_time <= now):
            task = self.arrivals[self._arrival_idx]
            self._arrival_idx += 1
            if not resource_le(task.request, self._admission_cap):
                self.unschedulable.append(task.task_id)
            else:
                self.queue.push(task, now)

    def _schedule(self, now: float) -> None:
        if self.scheduler == "fifo":
            decisions = schedule_fifo(self.queue, self.nodes, now)
        elif self.scheduler == "lrf":
            decisions = schedule_lrf(self.queue, self.nodes, now)
        elif self.scheduler in ("leastfit", "oversub"):
            theta = 1.0 if self.scheduler == "leastfit" else self.config.theta
            decisions = schedule_leastfit(self.queue, self.nodes, theta, now)
        else:
            decisions = schedule_flex(self.queue, self.nodes, self.controller,
                                      now, self.load_weight,
                                      self.spread_weight)
        for d in decisions:
            if d.node_id is None:
                continue
            task = self.nodes[d.node_id].placed_tasks[d.task_id]
            self.running[d.task_id] = _Running(task, d.node_id, now)
            self.admitted += 1
            self.pending_delays.append(now - task.arrival_time)

    def _monitor(self) -> None:
        # Estimates are refreshed from the previous tick's realized usage;
        # schedulers act on stale data between monitor events by design.
        for node in self.nodes:
            node.measured_load = self.last_realized[node.node_id]
            node.estimated_load = node.measured_load

    def _allocate_and_qos(self, now: float):
        # Float fast path over allocation._allocate_dim; equivalent to
        # allocate_node + task_qos per node but without per-task vectors.
        n_tasks = 0
        n_satisfied = 0
        realized = []
        running = self.running
        demands = self.demands
        for node in self.nodes:
            placed = node.placed_tasks
            if not placed:
                realized.append(ZERO)
                continue
            rc, rm, dc, dm = [], [], [], []
            for tid, task in placed.items():
                d = demands[tid].value_at(now - running[tid].start_time)
                rc.append(task.request.cpu)
                rm.append(task.request.mem)
                dc.append(d.cpu)
                dm.append(d.mem)
            cap = node.capacity
            ac = _allocate_dim(cap.cpu, rc, dc)
            am = _allocate_dim(cap.mem, rm, dm)
            realized.append(ResourceVector(sum(ac), sum(am)))
            n_tasks += len(ac)
            for k in range(len(ac)):
                if ((ac[k] >= dc[k] - _QOS_TOL and am[k] >= dm[k] - _QOS_TOL)
                        or (ac[k] >= rc[k] - _QOS_TOL
                            and am[k] >= rm[k] - _QOS_TOL)):
                    n_satisfied += 1
        self.last_realized = realized
        q = 1.0 if n_tasks == 0 else n_satisfied / n_tasks
        return q, realized

    def _complete(self, now: float) -> None:
        tick = self.config.tick_seconds
        done = [tid for tid, run in self.running.items()
                if now + tick - run.start_time >= run.task.duration - 1e-9]
        for tid in done:
            run = self.running.pop(tid)
            remove_task(self.nodes[run.node_id], tid)

    # -- main loop -----------------------------------------------------------

    def run(self):
        config = self.config
        tick = config.tick_seconds
        k = 0
        while True:
            now = k * tick
            if self.horizon_s is not None:
                if now >= self.horizon_s:
                    break
            elif (self._arrival_idx >= len(self.arrivals)
                  and len(self.queue) == 0 and not self.running
                  and k > 0):
                break

            self._admit_arrivals(now)
            self._schedule(now)
            if k % self._monitor_every == 0:
                self._monitor()
            q, realized = self._allocate_and_qos(now)
            if self.controller is not None and k > 0 and k % self._penalty_every == 0:
                self.controller.update(q)
            self._complete(now)

            total_req = ZERO
            for node in self.nodes:
                total_req = total_req + node.requested
            total_use = ZERO
            for u in realized:
                total_use = total_use + u
            p = self.controller.p if self.controller is not None else 1.0
            self.metrics.append(TickMetrics(
                time_s=now,
                total_req=total_req,
                total_use=total_use,
                cluster_q=q,
                penalty_p=p,
                max_load_frac=max(dominant_fraction(u, config.node_capacity)
                                  for u in realized),
                std_over_mean_cpu=_std_over_mean([u.cpu for u in realized]),
                std_over_mean_mem=_std_over_mean([u.mem for u in realized]),
                n_running=len(self.running),
                n_pending=len(self.queue),
                violated=q < config.qos_target,
            ))
            k += 1
            if self.horizon_s is None and k > 50_000_000:
                raise RuntimeError("simulation failed to terminate")

        summary = summarize(
            self.metrics, config.qos_target,
            n_nodes=config.n_nodes, node_capacity=config.node_capacity,
            admitted_tasks=self.admitted,
            unschedulable_tasks=len(self.unschedulable),
            mean_pending_delay_s=(sum(self.pending_delays)
                                  / len(self.pending_delays)
                                  if self.pending_delays else 0.0))
        return self.metrics, summary


def run_simulation(config: ClusterConfig, workload: Workload,
                   scheduler: str = "flexf", horizon_s: float | None = None,
                   load_weight: float = DEFAULT_LOAD_WEIGHT,
                   spread_weight: float = DEFAULT_SPREAD_WEIGHT):
    """Run one simulation and return (tick metrics, summary report)."""
    sim = Simulator(config, workload, scheduler, horizon_s,
                    load_weight, spread_weight)
    return sim.run()


def summarize(metrics, rho: float, *, n_nodes: int = 1,
              node_capacity: ResourceVector = ResourceVector(1.0, 1.0),
              admitted_tasks: int = 0, unschedulable_tasks: int = 0,
              mean_pending_delay_s: float = 0.0) -> SummaryReport:
    """Aggregate a run's tick metrics into a one-row report."""
    if not metrics:
        raise ValueError("cannot summarize an empty metrics list")
    n = len(metrics)
    cluster_cpu = n_nodes * node_capacity.cpu
    cluster_mem = n_nodes * node_capacity.mem
    return SummaryReport(
        n_nodes=n_nodes,
        node_capacity=node_capacity,
        ticks=n,
        avg_norm_req_cpu=sum(m.total_req.cpu for m in metrics) / n / cluster_cpu,
        avg_norm_req_mem=sum(m.total_req.mem for m in metrics) / n / cluster_mem,
        avg_norm_use_cpu=sum(m.total_use.cpu for m in metrics) / n / cluster_cpu,
        avg_norm_use_mem=sum(m.total_use.mem for m in metrics) / n / cluster_mem,
        violation_frac=sum(1 for m in metrics if m.cluster_q < rho) / n,
        mean_penalty=sum(m.penalty_p for m in metrics) / n,
        max_penalty=max(m.penalty_p for m in metrics),
        median_std_over_mean_cpu=statistics.median(
            m.std_over_mean_cpu for m in metrics),
        median_std_over_mean_mem=statistics.median(
            m.std_over_mean_mem for m in metrics),
        admitted_tasks=admitted_tasks,
        unschedulable_tasks=unschedulable_tasks,
        mean_pending_delay_s=mean_pending_delay_s,
    )


def _fmt(x: float) -> str:
    return format(x, ".10g")


def write_metrics_csv(path, metrics) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(METRICS_COLUMNS)
        for m in metrics:
            writer.writerow([
                _fmt(m.time_s), _fmt(m.total_req.cpu), _fmt(m.total_req.mem),
                _fmt(m.total_use.cpu), _fmt(m.total_use.mem),
                _fmt(m.cluster_q), _fmt(m.penalty_p), _fmt(m.max_load_frac),
                _fmt(m.std_over_mean_cpu), _fmt(m.std_over_mean_mem),
                m.n_running, m.n_pending, int(m.violated),
            ])


def write_summary_csv(path, summary: SummaryReport) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerow([
            summary.n_nodes, _fmt(summary.node_capacity.cpu),
            _fmt(summary.node_capacity.mem), summary.ticks,
            _fmt(summary.avg_norm_req_cpu), _fmt(summary.avg_norm_req_mem),
            _fmt(summary.avg_norm_use_cpu), _fmt(summary.avg_norm_use_mem),
            _fmt(summary.violation_frac), _fmt(summary.mean_penalty),
            _fmt(summary.max_penalty),
            _fmt(summary.median_std_over_mean_cpu),
            _fmt(summary.median_std_over_mean_mem),
            summary.admitted_tasks, summary.unschedulable_tasks,
            _fmt(summary.mean_pending_delay_s),
        ])
