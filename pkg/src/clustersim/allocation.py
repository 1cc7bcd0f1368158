"""Per-node, per-tick weighted-fair-share resource allocation.

Each resource dimension is allocated independently in three regimes:
demand fits (everyone gets demand), requests fit but demand does not
(request-guarantee then water-fill the leftover), or requests do not fit
(two water-fill passes weighted by requests).
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import ResourceVector

_TOL = 1e-12
# Stand-in weight for zero-request tasks so no WFS pass starves them.
_EPS_WEIGHT = 1e-12


@dataclass(frozen=True)
class AllocationResult:
    allocations: dict          # task_id -> ResourceVector (what the task runs with)
    surplus_share: dict        # task_id -> ResourceVector (allocation above request)


def water_fill(budget: float, weights: list, caps: list) -> list:
    """Split `budget` proportionally to `weights` under per-entry `caps`.

    Iteratively distributes the remaining budget proportional to the weights
    of uncapped entries, freezing entries that hit their cap and
    redistributing, until the budget is exhausted or everything is capped.
    Returns shares x with x_k <= cap_k and sum(x) = min(budget, sum(caps)).
    """
    if len(weights) != len(caps):
        raise ValueError("invalid water-fill input: length mismatch")
    if budget < 0 or any(w <= 0 for w in weights) or any(c < 0 for c in caps):
        raise ValueError("invalid water-fill input")

    n = len(weights)
    shares = [0.0] * n
    active = [k for k in range(n) if caps[k] > 0]
    remaining = min(budget, sum(caps))
    # Each round caps at least one entry, so this runs at most n rounds.
    while remaining > _TOL and active:
        total_w = sum(weights[k] for k in active)
        newly_capped = set()
        for k in active:
            proposal = shares[k] + remaining * weights[k] / total_w
            if proposal >= caps[k] - _TOL:
                newly_capped.add(k)
        if newly_capped:
            for k in newly_capped:
                remaining -= caps[k] - shares[k]
                shares[k] = caps[k]
            active = [k for k in active if k not in newly_capped]
            remaining = max(0.0, remaining)
        else:
            for k in active:
                shares[k] += remaining * weights[k] / total_w
            remaining = 0.0
    return shares


def _allocate_dim(cap: float, reqs: list, dems: list) -> list:
    """Single-dimension allocation for one node."""
    n = len(reqs)
    total_d = sum(dems)
    if total_d <= cap + _TOL:
        # Case 1: everything fits, allocation equals demand.
        return list(dems)

    weights = [max(r, _EPS_WEIGHT) for r in reqs]
    total_r = sum(reqs)
    if total_r <= cap + _TOL:
        # Case 2: guarantee min(request, demand), water-fill the leftover
        # over the excess demands.
        guarantee = [min(r, d) for r, d in zip(reqs, dems)]
        leftover = max(0.0, cap - sum(guarantee))
        caps = [max(0.0, d - g) for d, g in zip(dems, guarantee)]
        extra = water_fill(leftover, weights, caps)
        return [g + e for g, e in zip(guarantee, extra)]

    # Case 3: requests oversubscribe the node; WFS on requests first,
    # then WFS any remainder over the residual demand.
    first = water_fill(cap, weights, [min(r, d) for r, d in zip(reqs, dems)])
    remainder = max(0.0, cap - sum(first))
    if remainder > _TOL:
        caps = [max(0.0, d - a) for d, a in zip(dems, first)]
        second = water_fill(remainder, weights, caps)
    else:
        second = [0.0] * n
    return [a + b for a, b in zip(first, second)]


def allocate_node(capacity: ResourceVector, tasks: list) -> AllocationResult:
    """Allocate one node's capacity among its running tasks.

    `tasks` is a list of (task_id, request, current_demand) tuples with
    ResourceVector request/demand. Dimensions are allocated independently.
    """
    if capacity.cpu <= 0 or capacity.mem <= 0:
        raise ValueError("degenerate capacity")
    if not tasks:
        return AllocationResult({}, {})

    ids = [t[0] for t in tasks]
    cpu = _allocate_dim(capacity.cpu,
                        [t[1].cpu for t in tasks], [t[2].cpu for t in tasks])
    mem = _allocate_dim(capacity.mem,
                        [t[1].mem for t in tasks], [t[2].mem for t in tasks])

    allocations = {}
    surplus = {}
    for k, (tid, req, _dem) in enumerate(tasks):
        a = ResourceVector(cpu[k], mem[k])
        allocations[tid] = a
        s = a.sub_clamped(req)
        if s.cpu > 0 or s.mem > 0:
            surplus[tid] = s
    return AllocationResult(allocations, surplus)
