"""Command-line entry point: metrics files in, four comparison figures out."""

from __future__ import annotations

import argparse
import sys

from .loader import FigureInputError, RunSet, load_run
from .plots import plot_all


def parse_run_arg(text: str):
    label, sep, path = text.partition("=")
    if not sep or not label or not path:
        raise argparse.ArgumentTypeError(
            f"expected label=path/metrics.csv, got {text!r}")
    return label, path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simfigures",
        description="Render comparison figures (utilization, QoS, penalty, "
                    "load balance) from simulation metrics files.")
    parser.add_argument("--run", action="append", type=parse_run_arg,
                        required=True, metavar="LABEL=METRICS_CSV",
                        help="repeatable; summary sidecar is found next to "
                             "each metrics file")
    parser.add_argument("--out", default="figures_out",
                        help="output directory for the four images")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        runs = [load_run(label, path) for label, path in args.run]
        written = plot_all(RunSet(runs, args.out))
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in sorted(written):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
