"""Command-line harness: reproducible experiments with CSV/SVG artifacts.

Every subcommand writes its rows as CSV (deterministic for a fixed config
and seed), optional SVG plots, and a metadata.json recording the config,
library versions, and the frozen constants in use.  Exit codes: 0 ok,
1 assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import constants
from .diophantine import (
    PhiFunction,
    fit_phi,
    invert_L,
    littlewood_trajectory,
    mult_badness,
    parse_alpha,
    parse_alpha_vector,
    parse_phi,
)
from .discrepancy import (
    TestBox,
    WitnessTooSmall,
    classical_star_discrepancy_1d,
    direct_discrepancy,
    dual_discrepancy,
    lower_bound_witness,
    smoothing_floor_constant,
    sup_discrepancy,
    uncertainty_count,
)
from .lattices import Lattice, bohr_count, dani_lattice, minkowski_lattice
from .weights import default_weight_system, parse_weight_spec


@dataclass(frozen=True)
class Schedule:
    start: int
    ratio: float
    count: int

    def values(self) -> list[int]:
        return [int(round(self.start * self.ratio**i)) for i in range(self.count)]


def parse_schedule(spec: str) -> Schedule:
    """'start:ratio:count' geometric grid, e.g. '100:10:5'."""
    try:
        start_s, ratio_s, count_s = spec.split(":")
        sched = Schedule(int(start_s), float(ratio_s), int(count_s))
    except ValueError as exc:
        raise ValueError(f"bad schedule {spec!r}: want start:ratio:count") from exc
    if sched.count < 1 or sched.start < 1 or sched.ratio <= 0:
        raise ValueError(f"bad schedule {spec!r}")
    return sched


def resolve_lattice(args) -> tuple[Lattice, int]:
    """Build the lattice from --alpha (Dani) or --lattice; returns (lat, d)."""
    if getattr(args, "alpha", None):
        alphas = parse_alpha_vector(args.alpha, args.d)
        vals = [float(a.to_longdouble()) for a in alphas]
        return dani_lattice(vals), len(vals)
    if getattr(args, "lattice", None):
        spec = args.lattice
        if spec.startswith("minkowski:"):
            lat, _ = minkowski_lattice(spec[len("minkowski:"):])
            return lat, lat.k - 1
        if spec.startswith("dani:"):
            alphas = parse_alpha_vector(spec[len("dani:"):], args.d)
            vals = [float(a.to_longdouble()) for a in alphas]
            return dani_lattice(vals), len(vals)
        raise ValueError(f"bad lattice spec {spec!r}")
    raise ValueError("one of --alpha or --lattice is required")


def resolve_phi(spec: str, args) -> PhiFunction:
    """'const:C', 'log:a,b,C', or 'fit:M' (fit needs --alpha)."""
    if spec.startswith("fit:"):
        if not getattr(args, "alpha", None):
            raise ValueError("phi fit:M needs --alpha")
        M = int(spec.split(":")[1])
        alphas = parse_alpha_vector(args.alpha, args.d)
        worst, records = mult_badness(alphas, M)
        return fit_phi(records if records else [worst])
    return parse_phi(spec)


def write_csv(path: Path, header: list[str], rows: list[list]):
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def write_metadata(outdir: Path, args, extra: dict | None = None):
    from . import __version__

    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    meta = {
        "config": config,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "smoothdisc": __version__,
        },
        "constants": {
            k: v for k, v in sorted(vars(constants).items())
            if k.isupper()
        },
    }
    if extra:
        meta.update(extra)
    with open(outdir / "metadata.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def save_plot(path: Path, xs, series: dict[str, list[float]], xlabel: str,
              ylabel: str, logx: bool = True):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in series.items():
        ax.plot(xs, ys, marker="o", label=label)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_discrepancy(args) -> int:
    lat, d = resolve_lattice(args)
    ws = parse_weight_spec(args.weights, d) if args.weights else \
        default_weight_system(d)
    phi = resolve_phi(args.phi, args)
    sched = parse_schedule(args.N)
    out = _outdir(args)
    header = ["N", "sup_estimate", "phi_of_L", "ratio", "best_method",
              "best_rho", "best_gamma", "tail"]
    rows = []
    sups, phis = [], []
    for N in sched.values():
        scan = sup_discrepancy(lat, ws, N, J=args.J,
                               gamma_samples=args.gamma_samples,
                               seed=args.seed, tol=args.tol)
        phi_l = phi(invert_L(max(N, phi(1.0)), phi))
        rows.append([
            N, scan.estimate, phi_l, scan.estimate / phi_l,
            scan.best["method"],
            ";".join(repr(r) for r in scan.best["rho"]),
            ";".join(repr(g) for g in scan.best["gamma"]),
            scan.best["tail"],
        ])
        sups.append(scan.estimate)
        phis.append(phi_l)
    write_csv(out / "discrepancy.csv", header, rows)
    save_plot(out / "discrepancy.svg", sched.values(),
              {"sup estimate": sups, "phi(L(N))": phis}, "N", "value")
    write_metadata(out, args, {"phi": phi.describe()})
    return 0


def cmd_poisson_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    alpha_specs = {1: ["golden", "sqrt:2"], 2: ["cubic:7"]}
    out = _outdir(args)
    header = ["i", "d", "alpha", "N", "rho", "direct", "dual", "diff",
              "tail", "ok"]
    rows = []
    failures = []
    for i in range(args.count):
        d = int(rng.choice(args.dims))
        spec = alpha_specs[d][int(rng.integers(len(alpha_specs[d])))]
        alphas = parse_alpha_vector(spec, d)
        lat = dani_lattice([float(a.to_longdouble()) for a in alphas])
        ws = default_weight_system(d)
        rho = tuple(0.499 * 2.0 ** (-int(j)) for j in rng.integers(0, 6, d))
        N = int(10 ** rng.uniform(2, 4))
        box = TestBox(gamma=(0.0,) * d, rho=rho)
        dr = direct_discrepancy(lat, ws, box, N)
        du = dual_discrepancy(lat, ws, box, N, tol=args.tol)
        dual_value = -du.value if args.inject_fault else du.value
        diff = abs(dr.value - dual_value)
        ok = diff <= du.tail_bound + 1e-8
        rows.append([i, d, spec, N, ";".join(repr(r) for r in rho),
                     dr.value, dual_value, diff, du.tail_bound, int(ok)])
        if not ok:
            failures.append(rows[-1])
    write_csv(out / "poisson_check.csv", header, rows)
    write_metadata(out, args, {"failures": len(failures)})
    if failures:
        print("poisson-check FAIL; first failing configuration:")
        print(dict(zip(header, failures[0])))
        return 1
    print(f"poisson-check ok ({len(rows)} configurations)")
    return 0


def cmd_witness(args) -> int:
    lat, d = resolve_lattice(args)
    ws = parse_weight_spec(args.weights, d) if args.weights else \
        default_weight_system(d)
    phi = resolve_phi(args.phi, args)
    alphas = parse_alpha_vector(args.alpha, d)
    _, records = mult_badness(alphas, args.M)
    records = sorted(records, key=lambda r: r.height)
    out = _outdir(args)
    header = ["j", "m", "H", "N", "lower_bound", "measured", "tail", "note"]
    rows = []
    accepted = []
    violations = 0
    for j, rec in enumerate(records):
        try:
            w = lower_bound_witness(lat, ws, rec, phi, tol=args.tol)
        except WitnessTooSmall as exc:
            rows.append([j, ";".join(str(v) for v in rec.m),
                         rec.height, "", "", "", "", f"skipped: {exc}"])
            continue
        except RuntimeError as exc:
            rows.append([j, ";".join(str(v) for v in rec.m),
                         rec.height, "", "", "", "", f"VIOLATION: {exc}"])
            violations += 1
            continue
        rows.append([j, ";".join(str(v) for v in rec.m), rec.height, w.N,
                     w.lower_bound, w.measured, w.tail_bound, ""])
        accepted.append(w)
    write_csv(out / "witness.csv", header, rows)
    write_metadata(out, args, {
        "accepted": len(accepted),
        "floor_constant": smoothing_floor_constant(ws),
    })
    if violations:
        print(f"witness: {violations} lower-bound violations")
        return 1
    print(f"witness ok ({len(accepted)} accepted rows)")
    return 0


def cmd_littlewood(args) -> int:
    alpha = parse_alpha(args.alpha)
    beta = parse_alpha(args.beta)
    records = littlewood_trajectory(alpha, beta, args.N)
    out = _outdir(args)
    header = ["n", "product", "n_log_n_product"]
    rows = [[n, p, p * math.log(n) if n > 1 else 0.0] for n, p in records]
    write_csv(out / "littlewood.csv", header, rows)
    write_metadata(out, args)
    print(f"littlewood: {len(rows)} record minima up to N={args.N}")
    return 0


def cmd_bohr(args) -> int:
    rng = np.random.default_rng(args.seed)
    golden_lat = dani_lattice(
        [float(parse_alpha("golden").to_longdouble())])
    golden_phi = PhiFunction(C=constants.GOLDEN_BADNESS_C)
    mink_lat, _ = minkowski_lattice("cubic:7")
    mink_phi = PhiFunction(C=constants.CUBIC_PHI_CONSTANT)
    configs = [("dani:golden", golden_lat, golden_phi),
               ("minkowski:cubic:7", mink_lat, mink_phi)]
    out = _outdir(args)
    header = ["lattice", "N", "rho", "count", "vol", "ratio",
              "uncertainty_count", "ok"]
    rows = []
    bad = 0
    produced = 0
    guard = 0
    while produced < args.count and guard < 100 * args.count:
        guard += 1
        name, lat, phi = configs[produced % 2]
        d = lat.k - 1
        N = int(10 ** rng.uniform(2, 5))
        rho = tuple(float(r) for r in rng.uniform(0.05, 0.49, d))
        vol = math.prod(rho) * N
        if vol < phi(invert_L(max(N, phi(1.0)), phi)):
            continue
        produced += 1
        count, volb, ratio = bohr_count(lat, None, N, rho)
        u = uncertainty_count(lat, rho, N)
        ok = ratio <= constants.BOHR_RATIO_BOUND and u == 0
        rows.append([name, N, ";".join(repr(r) for r in rho), count, volb,
                     ratio, u, int(ok)])
        bad += not ok
    write_csv(out / "bohr.csv", header, rows)
    write_metadata(out, args, {"violations": bad})
    if bad:
        print(f"bohr: {bad} violations")
        return 1
    print(f"bohr ok ({len(rows)} configurations)")
    return 0


def cmd_scan_classical(args) -> int:
    alpha = parse_alpha(args.alpha)
    sched = parse_schedule(args.N)
    out = _outdir(args)
    header = ["N", "star_unnormalized", "log10_N"]
    rows = []
    for N in sched.values():
        v = classical_star_discrepancy_1d(alpha, N)
        rows.append([N, v, math.log10(N)])
    write_csv(out / "classical.csv", header, rows)
    xs = [r[0] for r in rows]
    save_plot(out / "classical.svg", xs,
              {"star discrepancy": [r[1] for r in rows]}, "N", "N * D*_N")
    slope = float(np.polyfit([r[2] for r in rows], [r[1] for r in rows], 1)[0])
    write_metadata(out, args, {"slope_per_decade": slope})
    print(f"scan-classical: slope per decade = {slope:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothdisc",
        description="smoothed discrepancy experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_lattice=True):
        if need_lattice:
            p.add_argument("--alpha", help="golden | sqrt:D | cubic:7 | "
                           "liouville:k | decimal")
            p.add_argument("--lattice", help="minkowski:cubic:7 | dani:SPEC")
            p.add_argument("--d", type=int, default=1,
                           help="dimension d for --alpha specs")
        p.add_argument("--weights", help="bspline:m=6,s=2/3[;...]")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("discrepancy", help="sup-discrepancy N sweep vs phi")
    common(p)
    p.add_argument("--N", default="100:10:4", help="start:ratio:count")
    p.add_argument("--phi", default="fit:100000")
    p.add_argument("--J", type=int, default=6)
    p.add_argument("--gamma-samples", type=int, default=0)
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("poisson-check", help="direct vs dual equality suite")
    common(p, need_lattice=False)
    p.add_argument("--count", type=int, default=40)
    p.add_argument("--dims", type=int, nargs="+", default=[1, 2])
    p.add_argument("--inject-fault", action="store_true",
                   help="test hook: flip the dual sign to force a failure")
    p.set_defaults(func=cmd_poisson_check)

    p = sub.add_parser("witness", help="lower-bound witness sweep")
    common(p)
    p.add_argument("--phi", default="log:1,0,1")
    p.add_argument("--M", type=int, default=300)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("littlewood", help="record minima of n||na||·||nb||")
    common(p, need_lattice=False)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--N", type=int, default=10**4)
    p.set_defaults(func=cmd_littlewood)

    p = sub.add_parser("bohr", help="Bohr-set size and uncertainty sweep")
    common(p, need_lattice=False)
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_bohr)

    p = sub.add_parser("scan-classical", help="classical star discrepancy")
    common(p, need_lattice=False)
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", default="100:10:5", help="start:ratio:count")
    p.set_defaults(func=cmd_scan_classical)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.out is None:
        args.out = f"runs/{args.command}"
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        parser.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
