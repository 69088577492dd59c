#!/usr/bin/env python3
"""Smooth vs classical discrepancy of the golden rotation.

Runs the sup-discrepancy scan and the classical star discrepancy on the
same geometric N grid and writes one CSV plus a comparison plot.  The
smooth column should stay flat while the classical column climbs with
log N.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from smoothdisc.cli import save_plot, write_csv
from smoothdisc.diophantine import golden_ratio
from smoothdisc.discrepancy import (
    classical_star_discrepancy_1d,
    sup_discrepancy,
)
from smoothdisc.lattices import dani_lattice
from smoothdisc.weights import default_weight_system


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-start", type=int, default=100)
    ap.add_argument("--decades", type=int, default=5)
    ap.add_argument("--J", type=int, default=8)
    ap.add_argument("--gamma-samples", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/boundedness")
    args = ap.parse_args()

    alpha = golden_ratio()
    lat = dani_lattice([float(alpha.to_longdouble())])
    ws = default_weight_system(1)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    Ns = [args.n_start * 10**i for i in range(args.decades)]
    rows = []
    for N in Ns:
        scan = sup_discrepancy(lat, ws, N, J=args.J,
                               gamma_samples=args.gamma_samples,
                               seed=args.seed, tol=1e-9)
        star = classical_star_discrepancy_1d(alpha, N)
        rows.append([N, scan.estimate, star, star / math.log(N)])
        print(f"N={N:>8d}  smooth sup={scan.estimate:.3e}  star={star:.4f}")

    write_csv(out / "boundedness.csv",
              ["N", "smooth_sup", "classical_star", "star_over_logN"], rows)
    save_plot(out / "boundedness.svg", Ns,
              {"smooth sup": [r[1] for r in rows],
               "classical star": [r[2] for r in rows]},
              "N", "discrepancy")
    slope = float(np.polyfit([math.log10(n) for n in Ns],
                             [r[2] for r in rows], 1)[0])
    print(f"classical slope per decade: {slope:.4f}")


if __name__ == "__main__":
    main()
