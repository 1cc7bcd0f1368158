"""The four comparison figures.

utilization.png  - normalized total request / total usage time series
qos.png          - CDF of per-tick cluster QoS + violation-fraction bars
penalty.png      - QoS over time + estimation penalty over time
balance.png      - std-over-mean of per-node memory usage over time
"""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .loader import FigureInputError, RunSet

FIGURE_NAMES = ("utilization.png", "qos.png", "penalty.png", "balance.png")


def qos_cdf(values):
    """Empirical CDF points of per-tick QoS: non-decreasing, ends at 1."""
    xs = np.sort(np.asarray(values, dtype=float))
    ys = np.arange(1, len(xs) + 1) / len(xs)
    return xs, ys


def _hours(run):
    return run["time_s"] / 3600.0


def _plot_utilization(runs, path):
    fig, (ax_req, ax_use) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for run in runs:
        t = _hours(run)
        ax_req.plot(t, run["total_req_cpu"] / run.cluster_cpu,
                    label=run.label)
        ax_use.plot(t, run["total_use_cpu"] / run.cluster_cpu,
                    label=run.label)
    ax_req.set_ylabel("normalized total request")
    ax_use.set_ylabel("normalized total usage")
    ax_use.set_xlabel("time (h)")
    ax_req.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_qos(runs, path):
    fig, (ax_cdf, ax_bar) = plt.subplots(1, 2, figsize=(9, 4))
    labels, fracs = [], []
    for run in runs:
        xs, ys = qos_cdf(run["cluster_q"])
        ax_cdf.step(xs, ys, where="post", label=run.label)
        labels.append(run.label)
        fracs.append(float(np.mean(run["violated"])))
    ax_cdf.set_xlabel("cluster QoS")
    ax_cdf.set_ylabel("CDF over ticks")
    ax_cdf.legend()
    ax_bar.bar(labels, fracs)
    ax_bar.set_ylabel("violation tick fraction")
    ax_bar.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_penalty(runs, path):
    fig, (ax_q, ax_p) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for run in runs:
        t = _hours(run)
        ax_q.plot(t, run["cluster_q"], label=run.label)
        ax_p.plot(t, run["penalty_p"], label=run.label)
    ax_q.set_ylabel("cluster QoS")
    ax_p.set_ylabel("estimation penalty")
    ax_p.set_xlabel("time (h)")
    ax_q.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_balance(runs, path):
    fig, ax = plt.subplots(figsize=(7, 4))
    for run in runs:
        ax.plot(_hours(run), run["std_over_mean_mem"], label=run.label)
    ax.set_xlabel("time (h)")
    ax.set_ylabel("memory usage std / mean across nodes")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_all(runset: RunSet) -> set:
    """Render all four figures into the output directory; returns the set of
    written file paths. Input files are never modified."""
    if not runset.runs:
        raise FigureInputError("need at least one run")
    os.makedirs(runset.out_dir, exist_ok=True)
    paths = {name: os.path.join(runset.out_dir, name)
             for name in FIGURE_NAMES}
    _plot_utilization(runset.runs, paths["utilization.png"])
    _plot_qos(runset.runs, paths["qos.png"])
    _plot_penalty(runset.runs, paths["penalty.png"])
    _plot_balance(runset.runs, paths["balance.png"])
    return set(paths.values())
