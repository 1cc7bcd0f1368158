"""Helpers to fabricate metrics/summary files in the engine's CSV schema."""

import csv
import math
import random

from simfigures.loader import METRICS_COLUMNS

SUMMARY_HEAD = ["n_nodes", "node_cpu", "node_mem", "ticks"]


def write_fake_run(directory, name="metrics.csv", n_ticks=50, seed=0,
                   n_nodes=10, node_cpu=64.0, node_mem=128.0):
    """One synthetic run: plausible column values, valid schema."""
    rnd = random.Random(seed)
    metrics_path = directory / name
    summary_path = directory / name.replace("metrics", "summary")
    with open(metrics_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(METRICS_COLUMNS)
        for k in range(n_ticks):
            q = min(1.0, 0.9 + rnd.random() * 0.2)
            use = 0.5 + 0.3 * math.sin(k / 7.0)
            writer.writerow([
                10.0 * k,
                n_nodes * node_cpu * 0.8, n_nodes * node_mem * 0.8,
                n_nodes * node_cpu * use, n_nodes * node_mem * use,
                q, 1.0 + rnd.random() * 0.5, use,
                rnd.random() * 0.3, rnd.random() * 0.3,
                rnd.randint(0, 500), rnd.randint(0, 50),
                int(q < 0.99),
            ])
    with open(summary_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_HEAD)
        writer.writerow([n_nodes, node_cpu, node_mem, n_ticks])
    return metrics_path, summary_path
