"""Scheduling policies: FIFO, LRF, LeastFit/Oversub, and the usage-based
filter/score scheduler (FlexF/FlexL), plus the brute-force placement oracle
used by the approximation-bound tests.

All policies share the same admission shape: pick (or score) a node for the
queue head, place it if the policy's capacity predicate holds, otherwise put
the task back with a retry backoff. Ties are always broken by lowest node_id
so runs are replayable.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass

from .domain import NodeState, TaskSpec, dominant_fraction, resource_le
from .estimation import PenaltyController

SCHEDULER_NAMES = ("fifo", "lrf", "leastfit", "oversub", "flexf", "flexl")

BACKOFF_BASE_S = 10.0
BACKOFF_CAP_S = 300.0

DEFAULT_LOAD_WEIGHT = 0.7
DEFAULT_SPREAD_WEIGHT = 0.3


@dataclass(frozen=True)
class PlacementDecision:
    task_id: str
    node_id: int | None     # None = deferred this round


@dataclass
class QueueEntry:
    task: TaskSpec
    enqueue_time: float
    retry_count: int = 0
    next_eligible_time: float = 0.0


def retry_backoff(retry_count: int) -> float:
    """10 s doubling per retry, capped at 300 s."""
    return min(BACKOFF_BASE_S * (2.0 ** retry_count), BACKOFF_CAP_S)


class PendingQueue:
    """Pending tasks, either in arrival order ("fifo") or ordered by memory
    request descending ("priority"), with a sleep area for backed-off tasks.
    """

    def __init__(self, kind: str = "fifo"):
        if kind not in ("fifo", "priority"):
            raise ValueError(f"unknown queue kind {kind!r}")
        self.kind = kind
        self._seq = itertools.count()
        self._ready_fifo: deque = deque()
        self._ready_heap: list = []
        self._sleeping: list = []   # (next_eligible_time, seq, entry)

    def __len__(self) -> int:
        return len(self._ready_fifo) + len(self._ready_heap) + len(self._sleeping)

    def _ready_push(self, entry: QueueEntry) -> None:
        if self.kind == "fifo":
            self._ready_fifo.append(entry)
        else:
            key = (-entry.task.request.mem, entry.task.arrival_time,
                   entry.task.task_id)
            heapq.heappush(self._ready_heap, (key, next(self._seq), entry))

    def push(self, task: TaskSpec, now: float = 0.0) -> None:
        self._ready_push(QueueEntry(task, enqueue_time=now,
                                    next_eligible_time=now))

    def wake(self, now: float) -> None:
        """Move every backed-off entry whose time has come into the ready set."""
        while self._sleeping and self._sleeping[0][0] <= now:
            _, _, entry = heapq.heappop(self._sleeping)
            self._ready_push(entry)

    def pop_ready(self) -> QueueEntry | None:
        if self.kind == "fifo":
            return self._ready_fifo.popleft() if self._ready_fifo else None
        if self._ready_heap:
            return heapq.heappop(self._ready_heap)[2]
        return None

    def defer(self, entry: QueueEntry, now: float) -> None:
        """Requeue after a failed attempt; never drops the task."""
        entry.retry_count += 1
        entry.next_eligible_time = now + retry_backoff(entry.retry_count - 1)
        heapq.heappush(self._sleeping,
                       (entry.next_eligible_time, next(self._seq), entry))


# --- node bookkeeping -------------------------------------------------------

def place_task(node: NodeState, task: TaskSpec) -> None:
    node.placed_tasks[task.task_id] = task
    node.requested = node.requested + task.request
    node.job_counts[task.job_id] = node.job_counts.get(task.job_id, 0) + 1
    # Reserve the request in the planning load until the next monitor sample
    # replaces it, so consecutive placements see each other.
    node.estimated_load = node.estimated_load + task.request


def remove_task(node: NodeState, task_id: str) -> None:
    task = node.placed_tasks.pop(task_id)
    node.requested = node.requested.sub_clamped(task.request)
    count = node.job_counts.get(task.job_id, 0) - 1
    if count > 0:
        node.job_counts[task.job_id] = count
    else:
        node.job_counts.pop(task.job_id, None)


def same_job_count(node: NodeState, job_id: str) -> int:
    return node.job_counts.get(job_id, 0)


# --- per-task node selection ------------------------------------------------
# Selection loops are inlined float math; they run once per node per
# scheduling attempt and dominate large runs. Ties go to the lowest node_id.

def select_fifo(task: TaskSpec, nodes) -> int | None:
    """Lowest-load node first, then the capacity check on estimated load."""
    best = None
    best_frac = 0.0
    for n in nodes:
        est, cap = n.estimated_load, n.capacity
        frac = max(est.cpu / cap.cpu, est.mem / cap.mem)
        if (best is None or frac < best_frac
                or (frac == best_frac and n.node_id < best.node_id)):
            best, best_frac = n, frac
    if resource_le(best.estimated_load + task.request, best.capacity):
        return best.node_id
    return None


def select_leastfit(task: TaskSpec, nodes, theta: float) -> int | None:
    """Least total requested resources, admission capped at theta * C."""
    r = task.request
    best = None
    best_frac = 0.0
    for n in nodes:
        req, cap = n.requested, n.capacity
        frac = max((req.cpu + r.cpu) / cap.cpu, (req.mem + r.mem) / cap.mem)
        if (best is None or frac < best_frac
                or (frac == best_frac and n.node_id < best.node_id)):
            best, best_frac = n, frac
    if resource_le(best.requested + task.request, best.capacity.scale(theta)):
        return best.node_id
    return None


def flex_filter(task: TaskSpec, nodes, p: float) -> list:
    """Nodes where p * estimated_load + request fits within capacity."""
    if p < 1:
        raise ValueError("penalty must be >= 1")
    return [n.node_id for n in nodes
            if resource_le(n.estimated_load.scale(p) + task.request,
                           n.capacity)]


def flex_score(task: TaskSpec, node: NodeState, p: float,
               load_weight: float = DEFAULT_LOAD_WEIGHT,
               spread_weight: float = DEFAULT_SPREAD_WEIGHT) -> float:
    """Prefer lightly loaded nodes and nodes with few same-job tasks."""
    headroom = 1.0 - dominant_fraction(node.estimated_load.scale(p),
                                       node.capacity)
    return (load_weight * headroom
            + spread_weight / (1.0 + same_job_count(node, task.job_id)))


def select_flex(task: TaskSpec, nodes, p: float,
                load_weight: float = DEFAULT_LOAD_WEIGHT,
                spread_weight: float = DEFAULT_SPREAD_WEIGHT) -> int | None:
    """Highest-scoring node among those passing the usage filter."""
    if p < 1:
        raise ValueError("penalty must be >= 1")
    r = task.request
    job_id = task.job_id
    best = None
    best_score = 0.0
    for n in nodes:
        est, cap = n.estimated_load, n.capacity
        pc, pm = est.cpu * p, est.mem * p
        if pc + r.cpu > cap.cpu or pm + r.mem > cap.mem:
            continue
        score = (load_weight * (1.0 - max(pc / cap.cpu, pm / cap.mem))
                 + spread_weight / (1.0 + n.job_counts.get(job_id, 0)))
        if (best is None or score > best_score
                or (score == best_score and n.node_id < best.node_id)):
            best, best_score = n, score
    return None if best is None else best.node_id


# --- batch scheduling over a queue ------------------------------------------

def _drain(queue: PendingQueue, nodes, pick, now: float) -> list:
    """Process every eligible entry once, placing or deferring each."""
    decisions = []
    by_id = {n.node_id: n for n in nodes}
    queue.wake(now)
    while (entry := queue.pop_ready()) is not None:
        node_id = pick(entry.task)
        if node_id is None:
            queue.defer(entry, now)
            decisions.append(PlacementDecision(entry.task.task_id, None))
        else:
            place_task(by_id[node_id], entry.task)
            decisions.append(PlacementDecision(entry.task.task_id, node_id))
    return decisions


def schedule_fifo(queue: PendingQueue, nodes, now: float = 0.0) -> list:
    return _drain(queue, nodes, lambda t: select_fifo(t, nodes), now)


def schedule_lrf(queue: PendingQueue, nodes, now: float = 0.0) -> list:
    if queue.kind != "priority":
        raise ValueError("LRF requires the priority queue variant")
    return _drain(queue, nodes, lambda t: select_fifo(t, nodes), now)


def schedule_leastfit(queue: PendingQueue, nodes, theta: float,
                      now: float = 0.0) -> list:
    if theta < 1:
        raise ValueError("theta must be >= 1")
    return _drain(queue, nodes, lambda t: select_leastfit(t, nodes, theta),
                  now)


def schedule_flex(queue: PendingQueue, nodes, controller: PenaltyController,
                  now: float = 0.0,
                  load_weight: float = DEFAULT_LOAD_WEIGHT,
                  spread_weight: float = DEFAULT_SPREAD_WEIGHT) -> list:
    return _drain(queue, nodes,
                  lambda t: select_flex(t, nodes, controller.p,
                                        load_weight, spread_weight),
                  now)


# --- exhaustive placement oracle (tests only) -------------------------------

def optimal_max_load(demands: list, n_nodes: int) -> float:
    """Exact minimum over all assignments of the maximum node load.

    Exhaustive n_nodes**len(demands) search with pruning; refuses instances
    beyond 12 tasks or 4 nodes.
    """
    if len(demands) > 12 or n_nodes > 4:
        raise ValueError("oracle limit exceeded")
    if n_nodes < 1:
        raise ValueError("need at least one node")
    if not demands:
        return 0.0

    order = sorted(demands, reverse=True)
    best = sum(order)
    loads = [0.0] * n_nodes

    def search(k: int):
        nonlocal best
        if k == len(order):
            best = min(best, max(loads))
            return
        seen = set()
        for i in range(n_nodes):
            if loads[i] in seen:     # symmetric branch
                continue
            seen.add(loads[i])
            if loads[i] + order[k] >= best:
                continue
            loads[i] += order[k]
            search(k + 1)
            loads[i] -= order[k]

    search(0)
    return best
