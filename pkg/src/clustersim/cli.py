"""Command-line entry point for running simulations."""

from __future__ import annotations

import argparse
import sys

from .domain import ClusterConfig, ResourceVector
from .engine import run_simulation, write_metrics_csv, write_summary_csv
from .schedulers import (DEFAULT_LOAD_WEIGHT, DEFAULT_SPREAD_WEIGHT,
                         SCHEDULER_NAMES)
from .workload import (SyntheticSpec, Workload, WorkloadError,
                       generate_synthetic, load_workload)

# --synthetic key=value keys -> SyntheticSpec fields
_SYNTH_KEYS = {
    "n": ("n_tasks", int),
    "rate": ("arrival_rate", float),
    "dlogmean": ("duration_log_mean", float),
    "dlogstd": ("duration_log_std", float),
    "ratio": ("demand_ratio_mean", float),
    "ratio_std": ("demand_ratio_std", float),
    "burst_prob": ("burst_prob", float),
    "burst_scale": ("burst_scale", float),
    "interval": ("sample_interval", float),
    "tasks_per_job": ("tasks_per_job_mean", float),
}


def parse_synthetic_spec(text: str, seed: int,
                         capacity: ResourceVector) -> SyntheticSpec:
    """Parse 'n=5000,rate=2,ratio=0.45,cpu=2:8,mem=4:16,...' into a spec."""
    kwargs = {"seed": seed, "capacity_cap": capacity}
    if text:
        for item in text.split(","):
            if "=" not in item:
                raise ValueError(f"bad synthetic field {item!r}, "
                                 "expected key=value")
            key, value = item.split("=", 1)
            key = key.strip()
            if key == "cpu" or key == "mem":
                lo, _, hi = value.partition(":")
                kwargs[f"{key}_request_range"] = (float(lo), float(hi))
            elif key in _SYNTH_KEYS:
                field, cast = _SYNTH_KEYS[key]
                kwargs[field] = cast(value)
            else:
                raise ValueError(f"unknown synthetic field {key!r}")
    return SyntheticSpec(**kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustersim",
        description="Desk-scale cluster scheduling simulator comparing "
                    "request-based and usage-estimation schedulers.")
    parser.add_argument("--scheduler", choices=SCHEDULER_NAMES,
                        default="flexf")
    parser.add_argument("--nodes", type=int, default=4000)
    parser.add_argument("--node-cpu", type=float, default=64.0)
    parser.add_argument("--node-mem", type=float, default=128.0)
    parser.add_argument("--theta", type=float, default=2.0)
    parser.add_argument("--alpha", type=float, default=0.99)
    parser.add_argument("--beta", type=float, default=1.0)
    parser.add_argument("--p0", type=float, default=1.5)
    parser.add_argument("--pmin", type=float, default=1.0)
    parser.add_argument("--qos-target", type=float, default=0.99)
    parser.add_argument("--tick", type=float, default=10.0)
    parser.add_argument("--monitor-interval", type=float, default=60.0)
    parser.add_argument("--penalty-interval", type=float, default=60.0)
    parser.add_argument("--workload", help="tasks.csv path")
    parser.add_argument("--usage", help="usage.csv path")
    parser.add_argument("--synthetic", nargs="?", const="", default=None,
                        metavar="SPEC",
                        help="generate a synthetic workload, e.g. "
                             "'n=5000,rate=2,ratio=0.45,cpu=2:8,mem=4:16'")
    parser.add_argument("--demand-scale", type=float, default=1.0)
    parser.add_argument("--horizon", type=float, default=None,
                        help="simulated seconds to run; default runs until "
                             "all tasks finish")
    parser.add_argument("--flex-load-weight", type=float,
                        default=DEFAULT_LOAD_WEIGHT)
    parser.add_argument("--flex-spread-weight", type=float,
                        default=DEFAULT_SPREAD_WEIGHT)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="metrics.csv")
    parser.add_argument("--summary", default="summary.csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    capacity = ResourceVector(args.node_cpu, args.node_mem)

    if args.synthetic is not None:
        if args.workload or args.usage:
            print("error: --synthetic and --workload are mutually exclusive",
                  file=sys.stderr)
            return 2
        workload = generate_synthetic(
            parse_synthetic_spec(args.synthetic, args.seed, capacity))
    elif args.workload and args.usage:
        try:
            workload = load_workload(args.workload, args.usage)
        except WorkloadError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        print("error: provide --workload/--usage or --synthetic",
              file=sys.stderr)
        return 2

    workload = workload.scale_demands(args.demand_scale)
    config = ClusterConfig(
        n_nodes=args.nodes, node_capacity=capacity, theta=args.theta,
        qos_target=args.qos_target, tick_seconds=args.tick,
        monitor_interval_seconds=args.monitor_interval,
        penalty_interval_seconds=args.penalty_interval,
        alpha=args.alpha, beta=args.beta, p0=args.p0, p_min=args.pmin,
        seed=args.seed)

    metrics, summary = run_simulation(
        config, workload, args.scheduler, horizon_s=args.horizon,
        load_weight=args.flex_load_weight,
        spread_weight=args.flex_spread_weight)
    write_metrics_csv(args.out, metrics)
    write_summary_csv(args.summary, summary)
    print(f"{args.scheduler}: {len(metrics)} ticks, "
          f"admitted={summary.admitted_tasks}, "
          f"violation_frac={summary.violation_frac:.4f}, "
          f"avg_norm_use_cpu={summary.avg_norm_use_cpu:.3f} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
