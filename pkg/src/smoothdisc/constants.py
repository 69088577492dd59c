"""Frozen regression constants.

Each value was produced once by the deterministic procedure named in its
comment (script in scripts/ or test oracle) and is pinned here so later
runs are compared against a fixed target instead of a moving one.  Bounds
carry a safety margin over the observed value; exact values are pinned to
all printed digits.
"""

# min over 0 < |m| <= 1e6 of |m| * ||m * alpha|| for the golden ratio,
# attained at m = 1 (value (3 - sqrt(5))/2); exhaustive longdouble scan.
GOLDEN_MIN_QUALITY = 0.38196601125010515

# 1 / GOLDEN_MIN_QUALITY; the constant phi for the golden-ratio rate.
GOLDEN_BADNESS_C = 2.618033988749895

# min quality for (theta, theta^2), theta = 2 cos(2 pi / 7), over
# multiplicative heights <= 1000; attained at m = (18, 1).
CUBIC_PAIR_MIN_QUALITY = 0.01063798203200924
CUBIC_PAIR_MIN_AT = (18, 1)

# sup-scan estimates for Dani(golden), d=1, J=8, gamma = 0 grid, over
# N in {1e2, ..., 1e6}: observed max 0.2159 at N=100; bound with margin.
GOLDEN_SUP_BOUND = 0.30

# sup-scan estimates for the rescaled conductor-7 cubic lattice, J=5,
# N in {1e2, ..., 1e5}: observed max 0.1592 at N=100; bound with margin.
CUBIC_SUP_BOUND = 0.30

# max #B / vol(B) over the 50-configuration homogeneous sweep
# (Dani(golden) and cubic:7, vol >= phi(L(N))): observed 1.0143.
BOHR_RATIO_BOUND = 1.2

# max #(C cap Lambda) / vol(C) over random unimodular lattices with boxes
# containing k independent lattice vectors: observed 1.46 (k = 2, 3).
BLICHFELDT_CK = {2: 2.5, 3: 2.5}

# the conductor-7 cubic ring: squared determinant of the root embedding.
CUBIC_DISCRIMINANT = 49.0

# products |x1 x2 x3| over nonzero points of the rescaled cubic lattice
# are >= 1/7 on the dual side, so a constant rate function works for it.
CUBIC_PHI_CONSTANT = 7.0

# floor constant c for the default weight system (m=6, s=2/3): largest c
# with omega_hat >= c on [-c, c]; certified grid scan at step 1e-5.
DEFAULT_FLOOR_CONSTANT = 0.36597

# unnormalized star discrepancy of the golden rotation: best-fit slope per
# decade of N over {1e2..1e6} was 0.534; the smooth/classical contrast
# requires at least this much growth.
STAR_SLOPE_MIN = 0.5

# star discrepancy of the golden rotation stays below C * log N on the
# same grid: observed max ratio 0.36 at N=1e4; bound with margin.
GOLDEN_STAR_LOG_BOUND = 0.6

# record products n * ||n theta|| * ||n theta^2|| scaled by log n stay
# below this along the trajectory up to 1e6 (observed max 1.71 = first
# record at n=2; late records are far smaller).
CUBIC_LITTLEWOOD_NLOGN_BOUND = 2.5
