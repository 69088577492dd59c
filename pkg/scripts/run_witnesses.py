#!/usr/bin/env python3
"""Lower-bound witnesses for an alpha with very good rational approximations.

Scans multiplicative badness records, builds the witness box for each deep
record, and prints the certified lower bound next to the measured value.
The measured column grows without bound along the deepest records.
"""

import argparse
from pathlib import Path

from smoothdisc.cli import write_csv
from smoothdisc.diophantine import mult_badness, parse_alpha_vector, parse_phi
from smoothdisc.discrepancy import WitnessTooSmall, lower_bound_witness
from smoothdisc.lattices import dani_lattice
from smoothdisc.weights import default_weight_system


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", default="liouville:5")
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--M", type=int, default=300)
    ap.add_argument("--phi", default="log:1,0,1")
    ap.add_argument("--out", default="runs/witnesses")
    args = ap.parse_args()

    alphas = parse_alpha_vector(args.alpha, args.d)
    lat = dani_lattice([float(a.to_longdouble()) for a in alphas])
    ws = default_weight_system(args.d)
    phi = parse_phi(args.phi)
    _, records = mult_badness(alphas, args.M)
    records = sorted(records, key=lambda r: (r.quality, r.height))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for rec in records:
        try:
            w = lower_bound_witness(lat, ws, rec, phi)
        except WitnessTooSmall:
            continue
        rows.append([";".join(str(v) for v in rec.m), rec.height, w.N,
                     w.lower_bound, w.measured, w.tail_bound])
        print(f"m={rec.m} H={rec.height:.0f} N={w.N} "
              f"bound={w.lower_bound:.4f} measured={w.measured:.4f}")
    write_csv(out / "witnesses.csv",
              ["m", "H", "N", "lower_bound", "measured", "tail"], rows)


if __name__ == "__main__":
    main()
