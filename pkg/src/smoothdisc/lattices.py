"""Unimodular lattices: duals, Dani and Minkowski constructions, and exact
point enumeration in symmetric boxes.

Enumeration works on integer coefficient vectors: global per-coefficient
bounds come from the rows of the inverse basis, the coefficient with the
widest range is resolved last (its feasible interval is computed per
combination of the others), and membership is re-checked exactly with a
small inclusion tolerance.  No basis reduction is performed; at k <= 4 and
desk-scale boxes determinism matters more than speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Lattice",
    "BudgetExceeded",
    "dani_lattice",
    "dual_lattice",
    "minkowski_lattice",
    "enumerate_box",
    "bohr_count",
    "shortest_in_box",
    "successive_minima_box",
    "lambda1_dual_body",
    "MEMBERSHIP_RTOL",
]

# Points within this relative distance of the boundary are included, so
# counts are stable under infinitesimal box growth.
MEMBERSHIP_RTOL = 1e-12

ENUM_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured point/cell budget."""


class SingularBasis(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """A full-rank lattice A * Z^k; columns of `basis` are the generators."""

    basis: np.ndarray
    kind: str = "explicit"  # explicit | dani | dani_dual | minkowski
    alpha: tuple[float, ...] | None = None  # the vector behind a Dani lattice
    provenance: str = "explicit"

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError("basis must be square")
        object.__setattr__(self, "basis", b)
        if abs(np.linalg.det(b)) < 1e-300:
            raise SingularBasis("basis columns are linearly dependent")

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @property
    def det_abs(self) -> float:
        return abs(float(np.linalg.det(self.basis)))

    @property
    def inv_basis(self) -> np.ndarray:
        return np.linalg.inv(self.basis)

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.basis))

    def is_unimodular(self, tol: float = 1e-9) -> bool:
        return abs(self.det_abs - 1.0) <= tol


def dani_lattice(alpha) -> Lattice:
    """Basis [[I, alpha], [0, 1]]: points (a + n*alpha, n), det = 1."""
    alpha = tuple(float(a) for a in alpha)
    d = len(alpha)
    if d < 1:
        raise ValueError("need d >= 1")
    b = np.eye(d + 1)
    b[:d, d] = alpha
    return Lattice(basis=b, kind="dani", alpha=alpha,
                   provenance="dani:" + ",".join(repr(a) for a in alpha))


def dual_lattice(lat: Lattice) -> Lattice:
    """Basis (A^{-1})^T; for Dani(alpha) this is [[I, 0], [-alpha^T, 1]]."""
    dual_basis = lat.inv_basis.T
    kind = "explicit"
    alpha = None
    if lat.kind == "dani":
        kind, alpha = "dani_dual", lat.alpha
    elif lat.kind == "dani_dual":
        kind, alpha = "dani", lat.alpha
    return Lattice(basis=dual_basis, kind=kind, alpha=alpha,
                   provenance=f"dual({lat.provenance})")


def _cubic7_roots() -> np.ndarray:
    """Roots of x^3 + x^2 - 2x - 1, largest first: 2cos(2pi j/7)."""
    j = np.array([1, 2, 3])
    return 2.0 * np.cos(2.0 * np.pi * j / 7.0)


def minkowski_lattice(field_spec: str = "cubic:7", rescale: bool = True):
    """Lattice of a totally real cubic under its real embeddings.

    Basis columns are the embedding vectors of 1, theta, theta^2.  With
    rescale=True the basis is divided by |det|^(1/3) to unit determinant.
    Returns (lattice, raw_det_abs); raw_det_abs**2 is the field
    discriminant.
    """
    if field_spec == "cubic:7":
        roots = _cubic7_roots()
    elif field_spec.startswith("poly:"):
        c0, c1, c2 = (int(v) for v in field_spec[5:].split(","))
        rts = np.roots([1, c2, c1, c0])
        if np.max(np.abs(rts.imag)) > 1e-9:
            raise ValueError(f"{field_spec}: complex embeddings, not totally real")
        roots = np.sort(rts.real)[::-1]
    else:
        raise ValueError(f"unknown field spec {field_spec!r}")
    basis = np.vander(roots, 3, increasing=True)  # rows: (1, theta_j, theta_j^2)
    raw_det = abs(float(np.linalg.det(basis)))
    if rescale:
        basis = basis / raw_det ** (1.0 / 3.0)
    return (
        Lattice(basis=basis, kind="minkowski",
                provenance=f"minkowski:{field_spec}"
                           + ("" if rescale else ":raw")),
        raw_det,
    )


def lll_reduce(basis: np.ndarray, delta: float = 0.75):
    """Float LLL on the columns of `basis`.

    Returns (reduced, T) with reduced = basis @ T and T integer unimodular.
    Rounding errors only degrade reduction quality, never correctness: any
    integer unimodular T leaves the lattice unchanged.
    """
    B = np.array(basis, dtype=float)
    k = B.shape[1]
    T = np.eye(k, dtype=np.int64)

    def gram_schmidt():
        Bs = np.zeros_like(B)
        mu = np.zeros((k, k))
        for i in range(k):
            Bs[:, i] = B[:, i]
            for j in range(i):
                denom = Bs[:, j] @ Bs[:, j]
                mu[i, j] = (B[:, i] @ Bs[:, j]) / denom if denom > 0 else 0.0
                Bs[:, i] -= mu[i, j] * Bs[:, j]
        return Bs, mu

    Bs, mu = gram_schmidt()
    i = 1
    steps = 0
    while i < k and steps < 10000:
        steps += 1
        for j in range(i - 1, -1, -1):
            q = round(mu[i, j])
            if q != 0:
                B[:, i] -= q * B[:, j]
                T[:, i] -= q * T[:, j]
                Bs, mu = gram_schmidt()
        lhs = Bs[:, i] @ Bs[:, i]
        rhs = (delta - mu[i, i - 1] ** 2) * (Bs[:, i - 1] @ Bs[:, i - 1])
        if lhs < rhs:
            B[:, [i - 1, i]] = B[:, [i, i - 1]]
            T[:, [i - 1, i]] = T[:, [i, i - 1]]
            Bs, mu = gram_schmidt()
            i = max(i - 1, 1)
        else:
            i += 1
    return B, T


def enumerate_box(lat: Lattice, s, gamma=None, budget: int = ENUM_BUDGET):
    """All points of (Lambda - gamma) in the box {|x_i| <= s_i}.

    Returns (coeffs, points), both sorted lexicographically by point
    coordinates; coeffs are w.r.t. the lattice's own basis.  Completeness is
    guaranteed by the bound |c_i| <= sum_j |B^{-1}[i,j]| (s_j + |gamma_j|)
    applied to an LLL-reduced basis B (the reduction keeps the coefficient
    ranges near the true point count even for very skew boxes); membership
    is re-checked with the inclusion tolerance MEMBERSHIP_RTOL.
    """
    s = np.asarray(s, dtype=float)
    k = lat.k
    if k > 4:
        raise BudgetExceeded("enumeration restricted to k <= 4")
    gamma = np.zeros(k) if gamma is None else np.asarray(gamma, dtype=float)
    if np.any(s <= 0):
        raise ValueError("box radii must be positive")

    # Reduce in coordinates where the box is the unit cube.
    _, T = lll_reduce(lat.basis / s[:, None])
    A = lat.basis @ T
    Ainv = np.linalg.inv(A)

    bounds = np.abs(Ainv) @ (s + np.abs(gamma))
    ranges = np.floor(bounds + 1e-9).astype(np.int64)
    # Resolve the widest coefficient last, via per-combination intervals.
    last = int(np.argmax(ranges))
    others = [i for i in range(k) if i != last]

    n_cells = 1
    for i in others:
        n_cells *= 2 * int(ranges[i]) + 1
    if n_cells > budget:
        raise BudgetExceeded(f"{n_cells} coefficient cells exceed budget {budget}")

    grids = np.meshgrid(*[np.arange(-ranges[i], ranges[i] + 1) for i in others],
                        indexing="ij") if others else []
    combos = (np.stack([g.ravel() for g in grids], axis=1)
              if others else np.zeros((1, 0), dtype=np.int64))

    slack = MEMBERSHIP_RTOL * np.maximum(1.0, s)
    a_last = A[:, last]
    partial = combos @ A[:, others].T - gamma  # (n_cells, k)

    lo = np.full(combos.shape[0], -np.inf)
    hi = np.full(combos.shape[0], np.inf)
    feasible = np.ones(combos.shape[0], dtype=bool)
    for j in range(k):
        aj = a_last[j]
        lo_j = -s[j] - slack[j] - partial[:, j]
        hi_j = s[j] + slack[j] - partial[:, j]
        if abs(aj) < 1e-300:
            feasible &= (lo_j <= 0) & (hi_j >= 0)
        elif aj > 0:
            lo = np.maximum(lo, lo_j / aj)
            hi = np.minimum(hi, hi_j / aj)
        else:
            lo = np.maximum(lo, hi_j / aj)
            hi = np.minimum(hi, lo_j / aj)

    c_lo = np.ceil(lo)
    counts = np.where(feasible, np.floor(hi) - c_lo + 1, 0)
    counts = np.maximum(counts, 0).astype(np.int64)
    total = int(counts.sum())
    if total > budget:
        raise BudgetExceeded(f"{total} candidate points exceed budget {budget}")

    if total == 0:
        return (np.zeros((0, k), dtype=np.int64), np.zeros((0, k)))

    reps = np.repeat(np.arange(combos.shape[0]), counts)
    offsets = np.concatenate([np.arange(c) for c in counts if c > 0])
    c_last_vals = c_lo[reps] + offsets
    red_coeffs = np.zeros((total, k), dtype=np.int64)
    red_coeffs[:, others] = combos[reps]
    red_coeffs[:, last] = c_last_vals.astype(np.int64)

    points = red_coeffs @ A.T - gamma
    inside = np.all(np.abs(points) <= s + slack, axis=1)
    red_coeffs, points = red_coeffs[inside], points[inside]

    coeffs = red_coeffs @ T.T  # back to the lattice's own basis
    order = np.lexsort(points.T[::-1])
    return coeffs[order], points[order]


def bohr_count(lat: Lattice, gamma, N: float, rho):
    """(#B, vol(B), ratio) for B = (Lambda - gamma) cap P_(rho, N)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0) or np.any(rho >= 0.5):
        raise ValueError("rho components must lie in (0, 1/2)")
    k = lat.k
    gamma = np.zeros(k) if gamma is None else np.asarray(gamma, dtype=float)
    s = np.concatenate([rho, [N]])
    _, pts = enumerate_box(lat, s, gamma)
    vol = float(2**k * np.prod(rho) * N)
    return len(pts), vol, len(pts) / vol


def _box_norms(points: np.ndarray, s: np.ndarray) -> np.ndarray:
    return np.max(np.abs(points) / s, axis=1)


def _canonical_witness(cands: np.ndarray) -> np.ndarray:
    """Lexicographically smallest candidate after folding v ~ -v to the
    representative whose first nonzero coordinate is positive."""
    folded = cands.copy()
    for row in folded:
        nz = np.flatnonzero(np.abs(row) > 1e-12)
        if len(nz) and row[nz[0]] < 0:
            row *= -1.0
    order = np.lexsort(folded.T[::-1])
    return folded[order][0]


def shortest_in_box(lat: Lattice, s, budget: int = ENUM_BUDGET):
    """Smallest t > 0 with a nonzero lattice point in t * P_s, plus witness.

    Ties in the box norm are broken by the lexicographically smallest
    witness.
    """
    s = np.asarray(s, dtype=float)
    # Grow the box until a nonzero point appears, then minimize exactly.
    t = 1.0
    for _ in range(200):
        _, pts = enumerate_box(lat, t * s, budget=budget)
        nonzero = pts[np.any(np.abs(pts) > 1e-12, axis=1)]
        if len(nonzero):
            norms = _box_norms(nonzero, s)
            lam1 = float(norms.min())
            cands = nonzero[np.abs(norms - lam1) <= 1e-12 * max(lam1, 1.0)]
            return lam1, _canonical_witness(cands)
        t *= 2.0
    raise BudgetExceeded("no nonzero point found (degenerate basis?)")


def successive_minima_box(lat: Lattice, s, budget: int = ENUM_BUDGET):
    """All k successive minima with respect to the box P_s, with witnesses."""
    s = np.asarray(s, dtype=float)
    k = lat.k
    t = 1.0
    for _ in range(200):
        _, pts = enumerate_box(lat, t * s, budget=budget)
        nonzero = pts[np.any(np.abs(pts) > 1e-12, axis=1)]
        if len(nonzero):
            norms = _box_norms(nonzero, s)
            order = np.argsort(norms, kind="stable")
            chosen, minima = [], []
            for i in order:
                v = nonzero[i]
                trial = np.array(chosen + [v])
                if np.linalg.matrix_rank(trial, tol=1e-9) == len(trial):
                    chosen.append(v)
                    minima.append(float(norms[i]))
                    if len(chosen) == k:
                        return minima, np.array(chosen)
        t *= 2.0
    raise BudgetExceeded("could not complete the successive minima")


def lambda1_dual_body(lat: Lattice, s, budget: int = ENUM_BUDGET):
    """First minimum w.r.t. the polar body of P_s, which is the weighted
    cross-polytope {x : sum_i s_i |x_i| <= 1}; returns (value, witness)."""
    s = np.asarray(s, dtype=float)
    # {sum s_i|x_i| <= t} is contained in {|x_i| <= t/s_i}.
    t = 1.0
    for _ in range(200):
        _, pts = enumerate_box(lat, t / s, budget=budget)
        nonzero = pts[np.any(np.abs(pts) > 1e-12, axis=1)]
        if len(nonzero):
            norms = np.abs(nonzero) @ s
            lam = float(norms.min())
            if lam <= t:  # certified: the min over the full polytope
                cands = nonzero[np.abs(norms - lam) <= 1e-12 * max(lam, 1.0)]
                return lam, _canonical_witness(cands)
        t *= 2.0
    raise BudgetExceeded("no nonzero point found in the polar body")
