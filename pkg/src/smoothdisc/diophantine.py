"""Exact and high-precision diophantine utilities.

Continued fractions of quadratic irrationals are computed with exact integer
state arithmetic; cubic-field values run at elevated mpmath precision with an
explicit error radius, so precision exhaustion is detected rather than
silently guessed.  Multiplicative badness scans, the badness-rate fit, and
Littlewood product trajectories live here as well.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

__all__ = [
    "RealNumber",
    "RationalNumber",
    "QuadraticIrrational",
    "CubicEmbedding",
    "DoubleValue",
    "golden_ratio",
    "sqrt_of",
    "cubic_field_unit",
    "liouville_like",
    "parse_alpha",
    "parse_alpha_vector",
    "continued_fraction",
    "convergents",
    "ApproxRecord",
    "mult_badness",
    "PhiFunction",
    "fit_phi",
    "invert_L",
    "littlewood_trajectory",
]


class IrrationalityError(ValueError):
    """Input must be irrational for this operation."""


class PrecisionExhausted(RuntimeError):
    """Floating state became ambiguous; no exact route is available."""


class EnvelopeExceeded(ValueError):
    """Requested scan range is above the configured brute-force budget."""


class RealNumber:
    """Base for scalar inputs; subclasses say how precise they can get."""

    exact = False

    def to_mpf(self, prec: int) -> mp.mpf:
        raise NotImplementedError

    def to_float(self) -> float:
        return float(self.to_mpf(64))

    def to_longdouble(self) -> np.longdouble:
        with mp.workprec(90):
            return np.longdouble(mp.nstr(self.to_mpf(90), 30))

    def is_rational(self) -> bool:
        return False


@dataclass(frozen=True)
class RationalNumber(RealNumber):
    value: Fraction

    def to_mpf(self, prec):
        with mp.workprec(prec):
            return mp.mpf(self.value.numerator) / self.value.denominator

    def is_rational(self):
        return True

    def __str__(self):
        return str(self.value)


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class QuadraticIrrational(RealNumber):
    """(p + q*sqrt(D)) / r with D a nonsquare positive integer, q != 0."""

    p: int
    q: int
    D: int
    r: int = 1

    exact = True

    def __post_init__(self):
        if self.q == 0 or self.D <= 0 or _is_square(self.D):
            raise IrrationalityError(
                f"({self.p}+{self.q}*sqrt({self.D}))/{self.r} is not a "
                "quadratic irrational"
            )
        if self.r == 0:
            raise ValueError("zero denominator")

    def to_mpf(self, prec):
        with mp.workprec(prec):
            return (self.p + self.q * mp.sqrt(self.D)) / self.r

    def __str__(self):
        return f"({self.p}+{self.q}*sqrt({self.D}))/{self.r}"


@dataclass(frozen=True)
class CubicEmbedding(RealNumber):
    """A real root of a totally real monic integer cubic, raised to a power.

    coeffs are (c0, c1, c2) for x**3 + c2 x**2 + c1 x + c0; roots are indexed
    in decreasing order, so root_index=1 is the largest root.
    """

    coeffs: tuple[int, int, int]
    root_index: int = 1
    power: int = 1

    def __post_init__(self):
        c0, c1, c2 = self.coeffs
        roots = np.roots([1, c2, c1, c0])
        if np.max(np.abs(roots.imag)) > 1e-9:
            raise ValueError(f"cubic {self.coeffs} is not totally real")
        if not 1 <= self.root_index <= 3:
            raise ValueError("root_index must be in 1..3")

    def to_mpf(self, prec):
        c0, c1, c2 = self.coeffs
        with mp.workprec(prec + 60):
            roots = mp.polyroots([1, c2, c1, c0], maxsteps=200, extraprec=60)
            roots = sorted((mp.mpf(r) for r in roots), reverse=True)
            return roots[self.root_index - 1] ** self.power

    def __str__(self):
        c0, c1, c2 = self.coeffs
        s = f"root#{self.root_index} of x^3+{c2}x^2+{c1}x+{c0}"
        return s if self.power == 1 else f"({s})^{self.power}"


@dataclass(frozen=True)
class DoubleValue(RealNumber):
    """A plain double with an error radius; comparisons inside the radius
    raise instead of guessing."""

    value: float
    err: float = 0.0

    def to_mpf(self, prec):
        with mp.workprec(prec):
            return mp.mpf(self.value)

    def __str__(self):
        return repr(self.value)


def golden_ratio() -> QuadraticIrrational:
    return QuadraticIrrational(p=1, q=1, D=5, r=2)


def sqrt_of(D: int) -> QuadraticIrrational:
    return QuadraticIrrational(p=0, q=1, D=D, r=1)


def cubic_field_unit(conductor: int = 7, power: int = 1) -> CubicEmbedding:
    """2*cos(2*pi/7) and its powers; the only built-in totally real cubic."""
    if conductor != 7:
        raise ValueError("only the conductor-7 cubic is built in")
    return CubicEmbedding(coeffs=(-1, -2, 1), root_index=1, power=power)


def liouville_like(depth: int = 5) -> RationalNumber:
    """Partial sum of 2**(-j!) for j <= depth: rational, but with very good
    rational approximations at the factorial denominators."""
    val = sum(Fraction(1, 2 ** math.factorial(j)) for j in range(1, depth + 1))
    return RationalNumber(val)


def parse_alpha(spec: str) -> RealNumber:
    """'golden', 'sqrt:D', 'cubic:7', 'cubic:7^2', 'liouville:5', 'p/q',
    or a decimal literal."""
    spec = spec.strip()
    if spec == "golden":
        return golden_ratio()
    if spec.startswith("sqrt:"):
        return sqrt_of(int(spec[5:]))
    if spec.startswith("cubic:"):
        body = spec[len("cubic:"):]
        power = 1
        if "^" in body:
            body, pow_s = body.split("^", 1)
            power = int(pow_s)
        return cubic_field_unit(int(body), power=power)
    if spec.startswith("liouville:"):
        return liouville_like(int(spec.split(":")[1]))
    if "/" in spec:
        return RationalNumber(Fraction(spec))
    value = float(spec)
    if value == int(value):
        return RationalNumber(Fraction(int(value)))
    return DoubleValue(value, err=abs(value) * 2 ** -52)


def parse_alpha_vector(spec: str, d: int) -> tuple[RealNumber, ...]:
    """Comma list of scalar specs; a bare 'cubic:7' at d=2 means the pair
    (theta, theta^2)."""
    parts = [s for s in spec.split(",") if s]
    if len(parts) == 1 and d > 1 and parts[0].startswith("cubic:"):
        base = parse_alpha(parts[0])
        return tuple(
            CubicEmbedding(base.coeffs, base.root_index, base.power * (i + 1))
            for i in range(d)
        )
    if len(parts) == 1 and d > 1:
        raise ValueError(f"need {d} comma-separated components in {spec!r}")
    if len(parts) != d:
        raise ValueError(f"need {d} components, got {len(parts)}")
    return tuple(parse_alpha(p) for p in parts)


# ---------------------------------------------------------------------------
# Continued fractions


def _floor_quadratic(p: int, q: int, D: int, r: int) -> int:
    """Exact floor((p + q*sqrt(D))/r), r > 0."""
    # Bracket q*sqrt(D) between adjacent integers.
    s = math.isqrt(q * q * D)
    if q < 0:
        lo, hi = -s - 1, -s if s * s != q * q * D else -s
        lo = -math.isqrt(q * q * D) - 1
        hi = lo + 1
    else:
        lo = s
        hi = s + 1
    n = (p + lo) // r  # candidate, may be off by one
    while not _ge_quadratic(p, q, D, r, n):
        n -= 1
    while _ge_quadratic(p, q, D, r, n + 1):
        n += 1
    return n


def _ge_quadratic(p: int, q: int, D: int, r: int, n: int) -> bool:
    """Exact test (p + q*sqrt(D))/r >= n for r > 0."""
    # p + q*sqrt(D) >= n*r  <=>  q*sqrt(D) >= n*r - p
    rhs = n * r - p
    if q >= 0:
        if rhs <= 0:
            return True
        return q * q * D >= rhs * rhs
    if rhs >= 0:
        return False
    return q * q * D <= rhs * rhs


def _cf_quadratic(x: QuadraticIrrational, count: int):
    p, q, D, r = x.p, x.q, x.D, x.r
    if r < 0:
        p, q, r = -p, -q, -r
    quotients = []
    seen: dict[tuple[int, int, int], int] = {}
    period = None
    for idx in range(count):
        state = (p, q, r)
        if state in seen and period is None:
            period = idx - seen[state]
        seen.setdefault(state, idx)
        a = _floor_quadratic(p, q, D, r)
        quotients.append(a)
        # 1 / (x - a) = r*(p' - q*sqrt(D)) / (p'**2 - q**2 * D)
        p1 = p - a * r
        num_p, num_q, den = r * p1, -r * q, p1 * p1 - q * q * D
        g = math.gcd(math.gcd(abs(num_p), abs(num_q)), abs(den))
        p, q, r = num_p // g, num_q // g, den // g
        if r < 0:
            p, q, r = -p, -q, -r
    return quotients, period


def _cf_float(value: mp.mpf, err: mp.mpf, count: int):
    quotients = []
    x, e = value, err
    for _ in range(count):
        fl = mp.floor(x)
        if mp.floor(x - e) != mp.floor(x + e):
            raise PrecisionExhausted(
                f"ambiguous floor after {len(quotients)} quotients"
            )
        quotients.append(int(fl))
        frac = x - fl
        if frac - e <= 0:
            raise PrecisionExhausted(
                f"residual vanished after {len(quotients)} quotients"
            )
        x = 1 / frac
        e = e / ((frac - e) * (frac - e))
    return quotients, None


def continued_fraction(alpha: RealNumber, count: int):
    """First `count` partial quotients of alpha.

    Returns (quotients, period); the period is reported for quadratic
    irrationals (None when not yet revisited within `count`).
    """
    if count < 1:
        raise ValueError("count must be positive")
    if alpha.is_rational():
        raise IrrationalityError("alpha must be irrational")
    if isinstance(alpha, QuadraticIrrational):
        return _cf_quadratic(alpha, count)
    if isinstance(alpha, CubicEmbedding):
        prec = max(256, 16 * count)
        with mp.workprec(prec):
            return _cf_float(alpha.to_mpf(prec), mp.mpf(2) ** (60 - prec), count)
    if isinstance(alpha, DoubleValue):
        with mp.workprec(80):
            err = mp.mpf(alpha.err) if alpha.err > 0 else mp.mpf(2) ** -52
            return _cf_float(mp.mpf(alpha.value), err, count)
    raise TypeError(f"unsupported input {type(alpha).__name__}")


def convergents(quotients) -> list[tuple[int, int]]:
    """(p_j, q_j) for the given partial quotients."""
    p0, q0, p1, q1 = 1, 0, quotients[0], 1
    out = [(p1, q1)]
    for a in quotients[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


# ---------------------------------------------------------------------------
# Multiplicative badness


@dataclass(frozen=True)
class ApproxRecord:
    """A dual approximation: integer vector m, its multiplicative height,
    and the distance of m . alpha to the nearest integer."""

    m: tuple[int, ...]
    height: float
    error: float

    @property
    def quality(self) -> float:
        return self.height * self.error


_BADNESS_BUDGET = {1: 10**6, 2: 10**3, 3: 300}


def _dist_to_int(x):
    return np.abs(x - np.round(x))


def _canonical_m(m: tuple[int, ...]) -> tuple[int, ...]:
    """Representative of {m, -m} whose first nonzero coordinate is positive."""
    for v in m:
        if v > 0:
            return m
        if v < 0:
            return tuple(-x for x in m)
    return m


def mult_badness(alphas, M: int, threshold: float = 1.0):
    """Scan all nonzero integer m with multiplicative height <= M and return
    (worst record, records with quality < threshold).

    The worst record minimizes height * ||m . alpha||, ties broken by
    smaller height then lexicographically smaller m.
    """
    alphas = tuple(alphas)
    d = len(alphas)
    if d not in _BADNESS_BUDGET:
        raise EnvelopeExceeded(f"dimension {d} not supported")
    if M > _BADNESS_BUDGET[d]:
        raise EnvelopeExceeded(
            f"M={M} above budget {_BADNESS_BUDGET[d]} for d={d}"
        )
    for a in alphas:
        # A rational alpha is fine as long as no scanned m can reach an
        # exact zero of ||m . alpha|| (denominator beyond the height range).
        if a.is_rational() and d == 1 and a.value.denominator <= M:
            raise IrrationalityError(
                "alpha must be irrational or have denominator above M"
            )
    vals = [a.to_longdouble() for a in alphas]

    below: list[ApproxRecord] = []
    best: ApproxRecord | None = None

    def consider(ms: np.ndarray, heights: np.ndarray, errs: np.ndarray):
        nonlocal best
        qual = heights * errs
        mask = qual < threshold
        for row, h, e in zip(ms[mask], heights[mask], errs[mask]):
            below.append(
                ApproxRecord(_canonical_m(tuple(int(v) for v in row)),
                             float(h), float(e))
            )
        i = int(np.argmin(qual))
        cand = ApproxRecord(_canonical_m(tuple(int(v) for v in ms[i])),
                            float(heights[i]), float(errs[i]))
        if best is None or _record_key(cand) < _record_key(best):
            best = cand

    if d == 1:
        m = np.arange(1, M + 1)
        errs = np.asarray(_dist_to_int(m.astype(np.longdouble) * vals[0]),
                          dtype=float)
        consider(m[:, None], m.astype(float), errs)
    else:
        # One representative per +-m pair: first nonzero coordinate positive.
        def rec(prefix, hprefix, dot, nonzero_seen):
            i = len(prefix)
            bound = int(M // hprefix)
            if i == d - 1:
                if nonzero_seen:
                    last = np.arange(-bound, bound + 1)
                else:
                    last = np.arange(1, bound + 1)
                if last.size == 0:
                    return
                ms = np.column_stack([np.tile(prefix, (last.size, 1)), last])
                hs = hprefix * np.maximum(1.0, np.abs(last)).astype(float)
                errs = np.asarray(
                    _dist_to_int(dot + last.astype(np.longdouble) * vals[i]),
                    dtype=float,
                )
                consider(ms, hs, errs)
                return
            lo = -bound if nonzero_seen else 0
            for v in range(lo, bound + 1):
                rec(prefix + [v], hprefix * max(1, abs(v)),
                    dot + np.longdouble(v) * vals[i], nonzero_seen or v != 0)

        rec([], 1, np.longdouble(0), False)

    below.sort(key=_record_key)
    return best, below


def _record_key(rec: ApproxRecord):
    return (rec.quality, rec.height, rec.m)


# ---------------------------------------------------------------------------
# Badness-rate functions


@dataclass(frozen=True)
class PhiFunction:
    """Non-decreasing rate function on [1, oo): either a constant C >= 1 or
    C * (log x)**a * (log log x)**b, with log x meaning max(1, log x)."""

    C: float
    a: float = 0.0
    b: float = 0.0
    verified_to: float | None = None

    def __post_init__(self):
        if self.C < 1 or self.a < 0 or self.b < 0:
            raise ValueError("need C >= 1, a >= 0, b >= 0")

    @property
    def is_constant(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def doubling(self) -> float:
        """limsup phi(2x)/phi(x): 1 for this whole family."""
        return 1.0

    def __call__(self, x):
        lx = np.maximum(1.0, np.log(np.maximum(1.0, np.asarray(x, dtype=float))))
        llx = np.maximum(1.0, np.log(lx))
        out = self.C * lx**self.a * llx**self.b
        return float(out) if np.ndim(x) == 0 else out

    def describe(self) -> str:
        if self.is_constant:
            return f"const:{self.C:.6g}"
        return f"logpower:a={self.a:g},b={self.b:g},C={self.C:.6g}"


def parse_phi(spec: str) -> PhiFunction:
    """'const:C' or 'log:a,b,C' (fit specs are handled by the CLI)."""
    if spec.startswith("const:"):
        return PhiFunction(C=float(spec.split(":")[1]))
    if spec.startswith("log:"):
        a, b, C = (float(v) for v in spec.split(":")[1].split(","))
        return PhiFunction(C=C, a=a, b=b)
    raise ValueError(f"bad phi spec {spec!r}")


_FIT_GRID = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (2.0, 0.0), (2.0, 1.0))


def fit_phi(records) -> PhiFunction:
    """Smallest rate function in the family that dominates 1/quality on the
    scanned records.

    Candidates are scored by how flat 1/(quality * shape) is across dyadic
    height windows; the flattest shape wins, ties preferring slower growth.
    The result is only certified up to the largest scanned height.
    """
    records = list(records)
    if not records:
        raise ValueError("empty record stream")
    heights = np.array([r.height for r in records])
    quals = np.array([max(r.quality, 1e-300) for r in records])
    max_h = float(heights.max())

    def shape(a, b, h):
        lh = np.maximum(1.0, np.log(h))
        return lh**a * np.maximum(1.0, np.log(lh))**b

    scored = []
    for rank, (a, b) in enumerate(_FIT_GRID):
        w = 1.0 / (quals * shape(a, b, heights))
        # running max of the constraint inside dyadic height windows
        edges = [1.0]
        while edges[-1] < max_h:
            edges.append(edges[-1] * 4)
        maxima = []
        for lo, hi in zip(edges, edges[1:] + [max_h * 2]):
            mask = (heights >= lo) & (heights < hi)
            if np.any(mask):
                maxima.append(float(w[mask].max()))
        flatness = max(maxima) / max(min(maxima), 1e-300)
        scored.append((flatness, rank, a, b, float(max(w.max(), 1.0))))
    scored.sort()
    _, _, a, b, C = scored[0]
    return PhiFunction(C=C, a=a, b=b, verified_to=max_h)


def invert_L(x: float, phi: PhiFunction) -> float:
    """H in [1, x] with H * phi(H) = x, by monotone bisection."""
    if x < phi(1.0):
        raise ValueError(f"x={x} below phi(1)={phi(1.0)}")
    if phi.is_constant:
        return min(max(x / phi.C, 1.0), x)
    lo, hi = 1.0, x
    f = lambda h: h * phi(h)
    if f(lo) >= x:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Littlewood trajectories


def littlewood_trajectory(alpha: RealNumber, beta: RealNumber, N: int,
                          chunk: int = 1 << 20):
    """Record-setting n for the product n * ||n a|| * ||n b||, n <= N.

    Returns a list of (n, product) at each new running minimum; equal
    products keep the smaller n.
    """
    if N > 10**8:
        raise EnvelopeExceeded(f"N={N} above the 1e8 trajectory budget")
    for v in (alpha, beta):
        if v.is_rational():
            raise IrrationalityError("alpha and beta must be irrational")
    a = alpha.to_longdouble()
    b = beta.to_longdouble()
    records = []
    best = np.inf
    warned = False
    for start in range(1, N + 1, chunk):
        n = np.arange(start, min(start + chunk, N + 1), dtype=np.longdouble)
        da = _dist_to_int(n * a)
        db = _dist_to_int(n * b)
        if not warned and (np.any(da < 1e-12) or np.any(db < 1e-12)):
            warnings.warn("||n*alpha|| below 1e-12: products may lose precision")
            warned = True
        prod = np.asarray(n * da * db, dtype=float)
        run = np.minimum.accumulate(prod)
        mask = (run < best) & (prod == run)
        idx = np.flatnonzero(mask)
        keep = []
        for i in idx:
            if prod[i] < best:
                best = prod[i]
                keep.append(i)
        for i in keep:
            records.append((int(start + i), float(prod[i])))
    return records
