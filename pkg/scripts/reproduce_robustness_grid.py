#!/usr/bin/env python3
"""Run the full robustness grid (3 methods x 3 contamination levels x 7
shift magnitudes) on seed-controlled synthetic data and write metrics.csv
plus asp_utility.csv.

Usage:
    python scripts/reproduce_robustness_grid.py --out results/grid --seed 0
"""

import argparse
import sys
from pathlib import Path

from drcontract.cli import dispatch
from drcontract.config import RunConfig, load_config, with_seed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default="", help="optional key = value config file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="results/grid")
    args = parser.parse_args()

    cfg = load_config(args.config) if args.config else RunConfig()
    cfg = with_seed(cfg, args.seed)
    return dispatch("bench", cfg, out=Path(args.out))


if __name__ == "__main__":
    sys.exit(main())
