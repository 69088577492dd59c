#!/usr/bin/env python3
"""Bohr-set size and uncertainty-set sweep over the built-in lattices.

For random boxes with volume above phi(L(N)) the point count should track
the volume (#B / vol bounded) and the dual uncertainty set should be empty.
Thin wrapper over the `smoothdisc bohr` subcommand.
"""

import argparse
import sys

from smoothdisc.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="runs/bohr_sweep")
    args = ap.parse_args()
    return cli_main(["bohr", "--count", str(args.count),
                     "--seed", str(args.seed), "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
