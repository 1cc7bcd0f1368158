"""Per-task and cluster-level quality of service."""

from __future__ import annotations

from dataclasses import dataclass

from .domain import ResourceVector

# Allocation values come out of float water-filling; compare with slack.
_TOL = 1e-9


@dataclass(frozen=True)
class QosSample:
    time: float
    q_per_task: dict        # task_id -> 0/1
    cluster_q: float
    violated: bool


def task_qos(request: ResourceVector, demand: ResourceVector,
             allocated: ResourceVector) -> int:
    """1 iff the task got its full demand or at least its full request."""
    if demand.le(allocated, _TOL) or request.le(allocated, _TOL):
        return 1
    return 0


def cluster_qos(samples, rho_j: float) -> float:
    """Fraction of running tasks whose q meets the per-task target.

    An empty task set is vacuously satisfied (returns 1.0).
    """
    if not (0 < rho_j <= 1):
        raise ValueError("rho_j must be in (0, 1]")
    samples = list(samples)
    if not samples:
        return 1.0
    return sum(1 for q in samples if q >= rho_j) / len(samples)


def make_sample(time: float, q_per_task: dict, rho_j: float,
                rho: float) -> QosSample:
    q = cluster_qos(q_per_task.values(), rho_j)
    return QosSample(time, dict(q_per_task), q, q < rho)
