"""Acceptance gate: the seven headline checks, one printed line each.

Run with `pytest -s tests/test_acceptance.py` to see the PASS/FAIL lines.
"""

import itertools
import math

import numpy as np
import sympy

from smoothdisc import constants
from smoothdisc.diophantine import (
    PhiFunction,
    golden_ratio,
    invert_L,
    liouville_like,
    mult_badness,
    parse_alpha_vector,
)
from smoothdisc.discrepancy import (
    TestBox,
    classical_star_discrepancy_1d,
    direct_discrepancy,
    dual_discrepancy,
    lower_bound_witness,
    sup_discrepancy,
    uncertainty_count,
)
from smoothdisc.lattices import (
    Lattice,
    dani_lattice,
    dual_lattice,
    enumerate_box,
    lambda1_dual_body,
    minkowski_lattice,
    successive_minima_box,
)
from smoothdisc.weights import default_weight_system

GOLDEN = float(golden_ratio().to_longdouble())


def report(index, name, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {index}] {name}: {status} ({detail})")
    assert ok, f"criterion {index} ({name}): {detail}"


def test_criterion_1_poisson_identity():
    rng = np.random.default_rng(2024)
    specs = [("golden", 1), ("sqrt:2", 1), ("cubic:7", 2)]
    lattices = {}
    for spec, d in specs:
        alphas = parse_alpha_vector(spec, d)
        lattices[spec] = (dani_lattice(
            [float(a.to_longdouble()) for a in alphas]),
            default_weight_system(d), d)
    worst = 0.0
    for i in range(200):
        spec, d = specs[i % 3]
        lat, ws, d = lattices[spec]
        rho = tuple(0.499 * 2.0 ** (-int(j)) for j in rng.integers(0, 6, d))
        N = int(10 ** rng.uniform(2, 4))
        box = TestBox(gamma=(0.0,) * d, rho=rho)
        dr = direct_discrepancy(lat, ws, box, N)
        du = dual_discrepancy(lat, ws, box, N, tol=1e-8)
        excess = abs(dr.value - du.value) - du.tail_bound
        worst = max(worst, excess)
        if excess > 1e-8:
            break
    report(1, "poisson identity over 200 configurations", worst <= 1e-8,
           f"max |direct-dual|-tail = {worst:.3e}")


def test_criterion_2_golden_boundedness():
    worst, _ = mult_badness([golden_ratio()], 10**6)
    scan_ok = worst.quality >= 1.0 / constants.GOLDEN_BADNESS_C - 1e-12
    lat = dani_lattice([GOLDEN])
    ws = default_weight_system(1)
    sups = []
    for N in [10**2, 10**3, 10**4, 10**5, 10**6]:
        scan = sup_discrepancy(lat, ws, N, J=8, gamma_samples=2, seed=0,
                               tol=1e-9)
        sups.append(scan.estimate)
    bounded = max(sups) <= constants.GOLDEN_SUP_BOUND
    no_growth = sups[-1] <= 1.2 * max(sups[:3]) + 1e-12
    report(2, "golden-ratio smooth discrepancy bounded",
           scan_ok and bounded and no_growth,
           f"min quality {worst.quality:.6f}, sup values "
           + ",".join(f"{s:.3e}" for s in sups))


def test_criterion_3_classical_contrast():
    Ns = [10**2, 10**3, 10**4, 10**5, 10**6]
    vals = [classical_star_discrepancy_1d(golden_ratio(), N) for N in Ns]
    slope = float(np.polyfit(np.log10(Ns), vals, 1)[0])
    report(3, "classical star discrepancy grows with log N",
           slope >= constants.STAR_SLOPE_MIN,
           f"slope {slope:.4f} per decade, values "
           + ",".join(f"{v:.3f}" for v in vals))


def test_criterion_4_lower_bound_witnesses():
    alpha = liouville_like(5)
    lat = dani_lattice([float(alpha.to_longdouble())])
    ws = default_weight_system(1)
    _, recs = mult_badness([alpha], 300)
    deep = sorted(sorted(recs, key=lambda r: r.quality)[:3],
                  key=lambda r: r.height)
    phi = PhiFunction(C=1.0, a=1.0)
    measured = []
    certs = True
    for rec in deep:
        w = lower_bound_witness(lat, ws, rec, phi, tol=1e-9)
        certs &= w.measured >= w.lower_bound - w.tail_bound
        measured.append(w.measured)
    increasing = all(a < b for a, b in zip(measured, measured[1:]))
    report(4, "unbounded lower-bound witnesses",
           certs and increasing and len(measured) == 3,
           "measured " + ",".join(f"{v:.4f}" for v in measured))


def test_criterion_5_bohr_and_uncertainty():
    from smoothdisc.lattices import bohr_count

    rng = np.random.default_rng(77)
    golden_lat = dani_lattice([GOLDEN])
    golden_phi = PhiFunction(C=constants.GOLDEN_BADNESS_C)
    mink_lat, _ = minkowski_lattice("cubic:7")
    mink_phi = PhiFunction(C=constants.CUBIC_PHI_CONSTANT)
    configs = [(golden_lat, golden_phi, 1), (mink_lat, mink_phi, 2)]
    max_ratio = 0.0
    uncertain = 0
    produced = 0
    while produced < 50:
        lat, phi, d = configs[produced % 2]
        N = int(10 ** rng.uniform(2, 5))
        rho = tuple(float(r) for r in rng.uniform(0.05, 0.49, d))
        vol = math.prod(rho) * N
        if vol < phi(invert_L(max(N, phi(1.0)), phi)):
            continue
        produced += 1
        _, _, ratio = bohr_count(lat, None, N, rho)
        max_ratio = max(max_ratio, ratio)
        uncertain += uncertainty_count(lat, rho, N) != 0
    report(5, "Bohr size bound and empty uncertainty sets",
           max_ratio <= constants.BOHR_RATIO_BOUND and uncertain == 0,
           f"max #B/vol = {max_ratio:.4f}, nonempty uncertainty sets: "
           f"{uncertain}/50")


def test_criterion_6_geometry_of_numbers():
    rng = np.random.default_rng(9)
    min_product = np.inf
    for _ in range(100):
        A = rng.normal(size=(3, 3))
        A /= abs(np.linalg.det(A)) ** (1 / 3)
        lat = Lattice(A)
        s = rng.uniform(0.4, 2.0, 3)
        minima, _ = successive_minima_box(lat, s)
        lam1_star, _ = lambda1_dual_body(dual_lattice(lat), s)
        min_product = min(min_product, minima[-1] * lam1_star)
    mahler_ok = min_product >= 1.0 - 1e-9

    s = np.array([0.5, 1.5, 2.5])
    y = rng.normal(size=(1000, 3))
    y /= (np.abs(y) @ s)[:, None]
    y *= rng.uniform(0, 1, (1000, 1))
    inclusion_ok = bool(np.all(np.abs(y) <= (1 / s) + 1e-12))

    raw, raw_det = minkowski_lattice("cubic:7", rescale=False)
    _, pts = enumerate_box(raw, [4.0, 4.0, 4.0])
    nz = pts[np.any(np.abs(pts) > 1e-9, axis=1)]
    norm_ok = bool(np.min(np.abs(np.prod(nz, axis=1))) >= 1.0 - 1e-9)

    x = sympy.symbols("x")
    disc = float(sympy.discriminant(x**3 + x**2 - 2 * x - 1, x))
    det_ok = abs(raw_det**2 - disc) <= 1e-6 and abs(disc - 49.0) < 1e-12

    report(6, "geometry-of-numbers suite",
           mahler_ok and inclusion_ok and norm_ok and det_ok,
           f"min Mahler product {min_product:.6f}, |det|^2 = "
           f"{raw_det**2:.9f}")


def test_criterion_7_oracle_equivalence():
    rng = np.random.default_rng(31)
    enum_ok = True
    for _ in range(100):
        k = int(rng.integers(2, 4))
        basis = rng.normal(size=(k, k))
        if abs(np.linalg.det(basis)) < 0.3:
            continue
        sbox = rng.uniform(0.5, 2.5, k)
        gamma = rng.uniform(-1, 1, k)
        _, pts = enumerate_box(Lattice(basis), sbox, gamma)
        inv = np.linalg.inv(basis)
        reach = np.abs(inv) @ (sbox + np.abs(gamma))
        ranges = [range(-int(np.floor(r + 1e-9)), int(np.floor(r + 1e-9)) + 1)
                  for r in reach]
        oracle = []
        for c in itertools.product(*ranges):
            xpt = basis @ np.array(c) - gamma
            if np.all(np.abs(xpt) <= sbox + 1e-12 * np.maximum(1, sbox)):
                oracle.append(tuple(xpt))
        oracle = np.array(sorted(oracle)) if oracle else np.zeros((0, k))
        if len(pts) != len(oracle) or (
                len(pts) and not np.allclose(pts, oracle, atol=1e-9)):
            enum_ok = False
            break

    badness_ok = True
    for spec in ["golden", "sqrt:2", "0.37226556"]:
        alpha = parse_alpha_vector(spec, 1)[0]
        worst, _ = mult_badness([alpha], 500)
        a = alpha.to_longdouble()
        ms = np.arange(1, 501, dtype=np.longdouble)
        errs = np.abs(ms * a - np.round(ms * a))
        quals = ms * errs
        i = int(np.argmin(quals))
        if worst.m != (int(ms[i]),) or \
                not math.isclose(worst.quality, float(quals[i]),
                                 rel_tol=1e-12):
            badness_ok = False
            break

    report(7, "naive-oracle equivalence", enum_ok and badness_ok,
           "enumeration 100/100, badness scans 3/3"
           if enum_ok and badness_ok else "mismatch found")
