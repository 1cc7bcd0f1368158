"""Desk-scale cluster scheduling simulator: request-based schedulers
(LeastFit, Oversub) versus usage-estimation schedulers with QoS-feedback
penalty control (FlexF, FlexL), over weighted-fair-share allocation.
"""

from .allocation import AllocationResult, allocate_node, water_fill
from .domain import (ClusterConfig, DemandSeries, NodeState, ResourceVector,
                     TaskSpec, dominant_fraction, resource_le)
from .engine import (Simulator, SummaryReport, TickMetrics, run_simulation,
                     summarize, write_metrics_csv, write_summary_csv)
from .estimation import (LoadEstimate, PenaltyController, effective_load,
                         estimate_load, update_penalty)
from .qos import QosSample, cluster_qos, task_qos
from .schedulers import (PendingQueue, PlacementDecision, flex_filter,
                         flex_score, optimal_max_load, schedule_fifo,
                         schedule_flex, schedule_leastfit, schedule_lrf)
from .workload import (SyntheticSpec, Workload, WorkloadError,
                       generate_synthetic, load_workload, write_workload)

__version__ = "0.1.0"
