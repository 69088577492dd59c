"""Smoothing weight systems built from scaled even-order cardinal B-splines.

A single weight is omega(x) = B_m(x/s), where B_m is the centered cardinal
B-spline of order m (the m-fold convolution of the indicator of [-1/2, 1/2]).
For even m the Fourier transform is omega_hat(xi) = s * sinc(s*xi)**m with
sinc(t) = sin(pi*t)/(pi*t), which is nonnegative with omega_hat(0) = s > 0.
The piecewise-polynomial coefficients of B_m are generated once, exactly, by
the convolution recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "BSplineWeight",
    "WeightSystem",
    "make_weight",
    "default_weight_system",
    "parse_weight_spec",
]


def _poly_shift(coeffs: list[Fraction], h: Fraction) -> list[Fraction]:
    """Coefficients of p(x + h) given ascending coefficients of p(x)."""
    n = len(coeffs)
    out = [Fraction(0)] * n
    for j, c in enumerate(coeffs):
        # c * (x + h)**j
        hk = Fraction(1)
        for i in range(j, -1, -1):
            out[i] += c * math.comb(j, i) * hk
            hk *= h
    return out


def _poly_integrate(coeffs: list[Fraction]) -> list[Fraction]:
    return [Fraction(0)] + [c / (i + 1) for i, c in enumerate(coeffs)]


def _poly_eval_frac(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def _bspline_pieces(order: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact global-coordinate polynomial pieces of B_order.

    Piece j is valid on [-order/2 + j, -order/2 + j + 1); coefficients are
    ascending in x.
    """
    pieces = [[Fraction(1)]]  # B_1 on [-1/2, 1/2)
    for m in range(1, order):
        # Antiderivative A of B_m with A(-m/2) = 0, piecewise.
        left = Fraction(-m, 2)
        anti = []
        acc = Fraction(0)
        for j, p in enumerate(pieces):
            ip = _poly_integrate(p)
            knot = left + j
            ip[0] += acc - _poly_eval_frac(ip, knot)
            anti.append(ip)
            acc = _poly_eval_frac(ip, knot + 1)
        total = acc  # integral of B_m over its support (equals 1)
        half = Fraction(1, 2)
        new_pieces = []
        for j in range(m + 1):
            # B_{m+1}(x) = A(x + 1/2) - A(x - 1/2) on the j-th new piece.
            if j < m:
                hi = _poly_shift(anti[j], half)
            else:
                hi = [total]
            if j > 0:
                lo = _poly_shift(anti[j - 1], -half)
            else:
                lo = [Fraction(0)]
            n = max(len(hi), len(lo))
            hi += [Fraction(0)] * (n - len(hi))
            lo += [Fraction(0)] * (n - len(lo))
            new_pieces.append([a - b for a, b in zip(hi, lo)])
        pieces = new_pieces
    return tuple(tuple(p) for p in pieces)


@lru_cache(maxsize=None)
def _bspline_coeff_matrix(order: int) -> np.ndarray:
    """Float coefficient matrix (pieces x degree+1, ascending) for B_order."""
    pieces = _bspline_pieces(order)
    deg = max(len(p) for p in pieces)
    mat = np.zeros((order, deg))
    for j, p in enumerate(pieces):
        mat[j, : len(p)] = [float(c) for c in p]
    return mat


_SINC_TAYLOR_CUT = 1e-4


def _sinc(t):
    """sin(pi t)/(pi t) with a degree-8 Taylor fallback near 0."""
    t = np.asarray(t, dtype=float)
    pt = np.pi * t
    small = np.abs(t) < _SINC_TAYLOR_CUT
    safe = np.where(small, 1.0, pt)
    out = np.where(small, 0.0, np.sin(pt) / safe)
    if np.any(small):
        z = pt * pt
        taylor = 1.0 - z / 6.0 + z * z / 120.0 - z**3 / 5040.0 + z**4 / 362880.0
        out = np.where(small, taylor, out)
    return out


class WeightError(ValueError):
    """Raised for inadmissible weight parameters."""


@dataclass(frozen=True)
class BSplineWeight:
    """omega(x) = B_order(x / scale); immutable and safe to share."""

    order: int
    scale: Fraction

    def __post_init__(self):
        if self.order % 2 != 0:
            raise WeightError(f"order must be even, got {self.order}")
        if self.order < 4:
            raise WeightError(
                f"order must be >= 4 for C^2 smoothness, got {self.order}"
            )
        if self.scale <= 0:
            raise WeightError(f"scale must be positive, got {self.scale}")
        if self.order * self.scale / 2 > 2:
            raise WeightError(
                f"support radius {self.order * self.scale / 2} exceeds 2"
            )

    @property
    def support_radius(self) -> float:
        return float(self.order * self.scale / 2)

    @property
    def smoothness(self) -> int:
        return self.order - 2

    def __call__(self, x):
        """Evaluate omega pointwise; exactly 0 outside the support."""
        s = float(self.scale)
        m = self.order
        u = np.asarray(x, dtype=float) / s
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        out = np.zeros_like(u)
        inside = np.abs(u) < m / 2
        if np.any(inside):
            ui = u[inside]
            idx = np.clip(np.floor(ui + m / 2).astype(int), 0, m - 1)
            mat = _bspline_coeff_matrix(m)
            acc = np.zeros_like(ui)
            for c in mat.T[::-1]:
                acc = acc * ui + c[idx]
            out[inside] = acc
        return float(out[0]) if scalar else out

    def fourier(self, xi):
        """omega_hat(xi) = scale * sinc(scale*xi)**order (nonnegative)."""
        s = float(self.scale)
        val = s * _sinc(s * np.asarray(xi, dtype=float)) ** self.order
        return float(val) if np.ndim(xi) == 0 else val

    def fourier_envelope(self, xi):
        """Monotone bound: omega_hat(xi) <= s * min(1, (pi s |xi|)**-order)."""
        s = float(self.scale)
        t = np.pi * s * np.abs(np.asarray(xi, dtype=float))
        with np.errstate(divide="ignore", over="ignore"):
            env = s * np.minimum(1.0, t ** (-float(self.order)))
        return float(env) if np.ndim(xi) == 0 else env

    def fourier_at_zero(self) -> float:
        return float(self.scale)


def make_weight(order: int, scale) -> BSplineWeight:
    """Validate and build a single B-spline weight."""
    return BSplineWeight(order=order, scale=Fraction(scale))


@dataclass(frozen=True)
class WeightSystem:
    """A k-tuple of weights, one per smoothed dimension (k = d + 1)."""

    components: tuple[BSplineWeight, ...]

    def __post_init__(self):
        if len(self.components) < 2:
            raise WeightError("need k = d + 1 >= 2 components")
        if self.smoothness < 2:
            raise WeightError("minimum component smoothness is 2")

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def d(self) -> int:
        return self.k - 1

    @property
    def smoothness(self) -> int:
        return min(w.smoothness for w in self.components)

    @property
    def expect_constant(self) -> float:
        """Product of the Fourier transforms at 0."""
        return math.prod(w.fourier_at_zero() for w in self.components)

    @property
    def last(self) -> BSplineWeight:
        return self.components[-1]

    def spec_string(self) -> str:
        parts = [f"bspline:m={w.order},s={w.scale}" for w in self.components]
        return ";".join(parts)


def default_weight_system(d: int) -> WeightSystem:
    """m=6, s=2/3 in every component: smoothness 4, support [-2, 2]."""
    w = make_weight(6, Fraction(2, 3))
    return WeightSystem(components=(w,) * (d + 1))


def parse_weight_spec(spec: str, d: int) -> WeightSystem:
    """Parse 'bspline:m=6,s=2/3' (one for all components) or a ';' list."""
    parts = spec.split(";")
    weights = []
    for part in parts:
        if not part.startswith("bspline:"):
            raise WeightError(f"unknown weight family in {part!r}")
        kv = dict(item.split("=", 1) for item in part[len("bspline:"):].split(","))
        weights.append(make_weight(int(kv["m"]), Fraction(kv["s"])))
    if len(weights) == 1:
        weights = weights * (d + 1)
    if len(weights) != d + 1:
        raise WeightError(f"need {d + 1} components, got {len(weights)}")
    return WeightSystem(components=tuple(weights))
