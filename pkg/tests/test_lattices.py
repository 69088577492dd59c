"""Lattice enumeration and geometry-of-numbers tests vs naive oracles."""

import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothdisc import constants
from smoothdisc.lattices import (
    BudgetExceeded,
    Lattice,
    bohr_count,
    dani_lattice,
    dual_lattice,
    enumerate_box,
    lambda1_dual_body,
    lll_reduce,
    minkowski_lattice,
    shortest_in_box,
    successive_minima_box,
)


def random_unimodular(rng, k):
    A = rng.normal(size=(k, k))
    return A / abs(np.linalg.det(A)) ** (1 / k)


def naive_enumerate(basis, s, gamma):
    """Oracle: triple loop over a generous coefficient range."""
    k = basis.shape[0]
    inv = np.linalg.inv(basis)
    reach = np.abs(inv) @ (np.asarray(s) + np.abs(gamma))
    ranges = [range(-int(np.floor(r + 1e-9)), int(np.floor(r + 1e-9)) + 1)
              for r in reach]
    pts = []
    for c in itertools.product(*ranges):
        x = basis @ np.array(c) - gamma
        if np.all(np.abs(x) <= np.asarray(s) + 1e-12 * np.maximum(1, s)):
            pts.append(x)
    return np.array(sorted(map(tuple, pts))) if pts else np.zeros((0, k))


@pytest.mark.parametrize("seed", range(10))
def test_enumerate_box_matches_naive(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 4))
    basis = rng.normal(size=(k, k))
    while abs(np.linalg.det(basis)) < 0.3:
        basis = rng.normal(size=(k, k))
    s = rng.uniform(0.5, 3.0, k)
    gamma = rng.uniform(-1, 1, k)
    _, pts = enumerate_box(Lattice(basis), s, gamma)
    oracle = naive_enumerate(basis, s, gamma)
    assert len(pts) == len(oracle)
    if len(pts):
        assert np.allclose(pts, oracle, atol=1e-9)


def test_enumerate_box_budget_error():
    lat = Lattice(np.eye(2))
    with pytest.raises(BudgetExceeded):
        enumerate_box(lat, [1e6, 1e6], budget=100)


def test_dani_structure():
    lat = dani_lattice([0.25, 0.5])
    assert lat.kind == "dani"
    assert lat.k == 3
    assert lat.det_abs == pytest.approx(1.0)
    # points are (a1 + n/4, a2 + n/2, n)
    _, pts = enumerate_box(lat, [0.3, 0.3, 2.5])
    for p in pts:
        n = round(p[2])
        assert p[2] == pytest.approx(n)
        assert (p[0] - n * 0.25) == pytest.approx(round(p[0] - n * 0.25))


def test_dual_pairing_is_integral():
    for lat in [dani_lattice([0.618]), minkowski_lattice("cubic:7")[0]]:
        dual = dual_lattice(lat)
        gram = dual.basis.T @ lat.basis
        assert np.allclose(gram, np.round(gram), atol=1e-9)
        assert np.allclose(np.abs(np.round(np.linalg.det(gram))), 1.0)


def test_double_dual_same_lattice():
    lat = dani_lattice([0.618, 0.112])
    dd = dual_lattice(dual_lattice(lat))
    # change of basis between lat and its double dual is integer unimodular
    M = np.linalg.inv(lat.basis) @ dd.basis
    assert np.allclose(M, np.round(M), atol=1e-9)
    assert abs(round(np.linalg.det(M))) == 1


def test_minkowski_determinants():
    lat, raw_det = minkowski_lattice("cubic:7")
    assert lat.det_abs == pytest.approx(1.0, abs=1e-9)
    assert raw_det**2 == pytest.approx(49.0, abs=1e-6)


def test_minkowski_discriminant_matches_sympy():
    x = sympy.symbols("x")
    poly = sympy.Poly(x**3 + x**2 - 2 * x - 1, x)
    disc = float(sympy.discriminant(poly.as_expr(), x))
    _, raw_det = minkowski_lattice("cubic:7")
    assert raw_det**2 == pytest.approx(disc, abs=1e-6)


def test_minkowski_norm_form():
    lat, raw_det = minkowski_lattice("cubic:7", rescale=False)
    _, pts = enumerate_box(lat, [4.0, 4.0, 4.0])
    nonzero = pts[np.any(np.abs(pts) > 1e-9, axis=1)]
    prods = np.abs(np.prod(nonzero, axis=1))
    assert len(nonzero) > 10
    assert np.min(prods) >= 1.0 - 1e-9


def test_lll_reduce_unimodular_and_shorter():
    rng = np.random.default_rng(11)
    for _ in range(20):
        k = int(rng.integers(2, 5))
        B = rng.normal(size=(k, k)) * np.exp(rng.normal(size=k))
        R, T = lll_reduce(B)
        assert abs(round(np.linalg.det(T.astype(float)))) == 1
        assert np.allclose(B @ T, R)
        assert np.prod(np.linalg.norm(R, axis=0)) <= \
            np.prod(np.linalg.norm(B, axis=0)) * (1 + 1e-9)


def test_bohr_count_integer_lattice():
    lat = Lattice(np.eye(3))
    count, vol, ratio = bohr_count(lat, None, 100, [0.4, 0.4])
    assert count == 201  # only a_i = 0 qualifies; n in [-100, 100]
    assert vol == pytest.approx(2**3 * 0.4 * 0.4 * 100)
    assert ratio == pytest.approx(201 / vol)


def test_bohr_count_rejects_bad_rho():
    with pytest.raises(ValueError):
        bohr_count(Lattice(np.eye(2)), None, 10, [0.6])


def test_shortest_in_box_z2():
    lam, witness = shortest_in_box(Lattice(np.eye(2)), [1.0, 1.0])
    assert lam == pytest.approx(1.0)
    assert np.allclose(np.abs(witness), [0.0, 1.0])


def test_successive_minima_integer_lattice():
    minima, wits = successive_minima_box(Lattice(np.eye(3)), [1.0, 1.0, 1.0])
    assert np.allclose(minima, 1.0)
    assert np.linalg.matrix_rank(wits) == 3


def test_successive_minima_are_sorted():
    rng = np.random.default_rng(5)
    for _ in range(5):
        lat = Lattice(random_unimodular(rng, 3))
        minima, wits = successive_minima_box(lat, np.ones(3))
        assert all(a <= b + 1e-12 for a, b in zip(minima, minima[1:]))
        assert np.linalg.matrix_rank(wits, tol=1e-9) == 3


def test_lambda1_dual_body_z2():
    lam, witness = lambda1_dual_body(Lattice(np.eye(2)), [1.0, 1.0])
    assert lam == pytest.approx(1.0)
    assert np.allclose(np.abs(witness), [0.0, 1.0])
    # weighted: min over nonzero integers of sum s_i |x_i| = min_i s_i
    lam2, _ = lambda1_dual_body(Lattice(np.eye(3)), [0.7, 2.0, 1.3])
    assert lam2 == pytest.approx(0.7)


@pytest.mark.parametrize("seed", range(20))
def test_mahler_lower_bound(seed):
    rng = np.random.default_rng(100 + seed)
    lat = Lattice(random_unimodular(rng, 3))
    dual = dual_lattice(lat)
    s = rng.uniform(0.4, 2.0, 3)
    minima, _ = successive_minima_box(lat, s)
    lam1_star, _ = lambda1_dual_body(dual, s)
    assert minima[-1] * lam1_star >= 1.0 - 1e-9


def test_polar_body_inside_reciprocal_cube():
    # y with sum s_i |y_i| <= 1 satisfies |y_i| <= 1/s_i
    rng = np.random.default_rng(2)
    s = np.array([0.5, 1.5, 2.5])
    y = rng.normal(size=(1000, 3))
    y /= (np.abs(y) @ s)[:, None]  # boundary of the polar body
    y *= rng.uniform(0, 1, (1000, 1))
    assert np.all(np.abs(y) <= (1 / s) + 1e-12)


def test_blichfeldt_desk_scale():
    rng = np.random.default_rng(3)
    for k in (2, 3):
        for _ in range(15):
            lat = Lattice(random_unimodular(rng, k))
            s = np.full(k, 0.5)
            for _ in range(40):
                minima, _ = successive_minima_box(lat, s)
                if minima[-1] <= 1.0:
                    break
                s *= 1.4
            count = len(enumerate_box(lat, s)[1])
            vol = float(np.prod(2 * s))
            assert count <= constants.BLICHFELDT_CK[k] * vol


def test_singular_basis_rejected():
    from smoothdisc.lattices import SingularBasis

    with pytest.raises(SingularBasis):
        Lattice(np.array([[1.0, 2.0], [2.0, 4.0]]))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_enumeration_symmetric_when_centered(seed):
    rng = np.random.default_rng(seed)
    basis = rng.normal(size=(2, 2))
    if abs(np.linalg.det(basis)) < 0.2:
        return
    s = rng.uniform(0.5, 2.0, 2)
    _, pts = enumerate_box(Lattice(basis), s)
    flipped = np.array(sorted(map(tuple, -pts)))
    assert np.allclose(np.array(sorted(map(tuple, pts))), flipped, atol=1e-9)
