"""Comparison figures for cluster-scheduling simulation runs."""

from .loader import (METRICS_COLUMNS, FigureInputError, RunData, RunSet,
                     load_run)
from .plots import FIGURE_NAMES, plot_all, qos_cdf

__version__ = "0.1.0"

__all__ = [
    "METRICS_COLUMNS", "FigureInputError", "RunData", "RunSet", "load_run",
    "FIGURE_NAMES", "plot_all", "qos_cdf",
]
