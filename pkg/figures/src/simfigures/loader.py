"""Loading and validation of simulator metrics/summary CSV files.

The simulator's external interface is a per-tick metrics.csv plus a
one-row summary.csv whose leading n_nodes/node_cpu/node_mem columns carry
the normalization divisor (cluster capacity = n_nodes * per-node capacity).
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

# Exact column schema emitted by the simulation engine.
METRICS_COLUMNS = [
    "time_s", "total_req_cpu", "total_req_mem", "total_use_cpu",
    "total_use_mem", "cluster_q", "penalty_p", "max_load_frac",
    "std_over_mean_cpu", "std_over_mean_mem", "n_running", "n_pending",
    "violated",
]


class FigureInputError(ValueError):
    """Unusable metrics/summary input."""


@dataclass
class RunData:
    """One labeled run: metrics columns as arrays plus cluster capacity."""

    label: str
    columns: dict                  # column name -> np.ndarray
    cluster_cpu: float
    cluster_mem: float

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def n_ticks(self) -> int:
        return len(self.columns["time_s"])


@dataclass
class RunSet:
    runs: list = field(default_factory=list)    # list[RunData]
    out_dir: str = "."


def _check_header(header, expected, path):
    if header == expected:
        return
    if header is None:
        raise FigureInputError(f"{path}: empty file")
    for got, want in zip(header, expected):
        if got != want:
            raise FigureInputError(
                f"{path}: schema mismatch at column {want!r} (found {got!r})")
    raise FigureInputError(
        f"{path}: schema mismatch, expected {len(expected)} columns, "
        f"found {len(header)}")


def default_summary_path(metrics_path: str) -> str:
    """Sidecar convention: 'metrics' -> 'summary' in the filename, falling
    back to summary.csv next to the metrics file."""
    directory, name = os.path.split(str(metrics_path))
    if "metrics" in name:
        candidate = os.path.join(directory, name.replace("metrics", "summary"))
        if os.path.exists(candidate):
            return candidate
    return os.path.join(directory, "summary.csv")


def _read_summary_capacity(summary_path: str):
    with open(summary_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or header[:3] != ["n_nodes", "node_cpu", "node_mem"]:
            raise FigureInputError(
                f"{summary_path}: schema mismatch at column 'n_nodes' "
                "(summary must lead with n_nodes,node_cpu,node_mem)")
        row = next(reader, None)
        if row is None:
            raise FigureInputError(f"{summary_path}: no data rows")
        n_nodes, cpu, mem = float(row[0]), float(row[1]), float(row[2])
    if n_nodes <= 0 or cpu <= 0 or mem <= 0:
        raise FigureInputError(f"{summary_path}: non-positive capacity")
    return n_nodes * cpu, n_nodes * mem


def load_run(label: str, metrics_path, summary_path=None) -> RunData:
    """Load one run, normalization capacity taken from the summary sidecar."""
    metrics_path = str(metrics_path)
    if summary_path is None:
        summary_path = default_summary_path(metrics_path)
    if not os.path.exists(summary_path):
        raise FigureInputError(f"{metrics_path}: missing summary sidecar "
                               f"(looked for {summary_path})")
    cluster_cpu, cluster_mem = _read_summary_capacity(str(summary_path))

    with open(metrics_path, newline="") as f:
        reader = csv.reader(f)
        _check_header(next(reader, None), METRICS_COLUMNS, metrics_path)
        rows = [row for row in reader if row]
    if not rows:
        raise FigureInputError(f"{metrics_path}: no data rows")
    data = np.array(rows, dtype=float)
    columns = {name: data[:, i] for i, name in enumerate(METRICS_COLUMNS)}
    return RunData(label, columns, cluster_cpu, cluster_mem)
