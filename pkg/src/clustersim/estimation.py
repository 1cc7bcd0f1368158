"""Node load estimation and the QoS-feedback penalty controller.

The planning load a usage-based scheduler acts on is penalty * estimate;
the penalty decays geometrically while QoS holds and inflates its
overestimation margin when QoS degrades.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import NodeState, ResourceVector


@dataclass(frozen=True)
class LoadEstimate:
    node_id: int
    l_hat: ResourceVector
    sampled_at: float


def estimate_load(node: NodeState, now: float = 0.0) -> LoadEstimate:
    """Simple estimator: the last monitored usage sample.

    A node with no sample yet reports zero (cold start); the penalty and the
    request term in the admission filter cover the resulting optimism.
    """
    return LoadEstimate(node.node_id, node.measured_load, now)


def effective_load(estimate: LoadEstimate, p: float) -> ResourceVector:
    """Planning load p * l_hat; deliberately uncapped, it may exceed C."""
    if p < 1:
        raise ValueError("penalty must be >= 1")
    return estimate.l_hat.scale(p)


@dataclass
class PenaltyController:
    """Feedback state for the estimation penalty P.

    While cluster QoS exceeds the target, P decays by alpha (floored at
    p_min). When QoS is below target and still worsening, the margin P - 1
    is inflated by beta (beta = 1 doubles it).
    """

    p: float
    p_min: float
    alpha: float
    beta: float
    rho: float
    last_q: float = 1.0

    def __post_init__(self):
        if self.p_min < 1 or self.p < self.p_min:
            raise ValueError("require p >= p_min >= 1")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must be in (0, 1)")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")

    def update(self, q_now: float) -> float:
        if not (0 <= q_now <= 1):
            raise ValueError("q must be in [0, 1]")
        if q_now > self.rho:
            self.p = max(self.p * self.alpha, self.p_min)
        elif q_now < self.rho and q_now < self.last_q:
            self.p = self.p + self.beta * (self.p - 1.0)
        self.last_q = q_now
        return self.p


def update_penalty(controller: PenaltyController, q_now: float) -> float:
    return controller.update(q_now)
