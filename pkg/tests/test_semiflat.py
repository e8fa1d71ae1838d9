import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropdlt.errors import NotStrictlyConvex, ZeroCoordinate
from tropdlt.plfunctions import support_function
from tropdlt.polyhedra import Polyhedron
from tropdlt.semiflat import (
    Conjugate,
    CustomPotential,
    Quadratic,
    ToricPotential,
    embedding_exponents,
    gradient_identity_check,
    legendre_dual,
    moment_map,
    pl_limit_check,
    pl_limit_function,
    potential_value,
    rescale_family,
    sample_window,
    sweep,
)

TWO_TERMS = [[0], [1]]
SQUARE = [[0, 0], [1, 0], [0, 1], [1, 1]]


def random_exponents(rng, n):
    while True:
        a = rng.integers(-3, 4, size=(rng.integers(2, 5), n))
        if len({tuple(r) for r in a.tolist()}) == len(a) and np.linalg.matrix_rank(a - a[0]) == n:
            return a


def test_moment_map_examples():
    assert abs(moment_map(TWO_TERMS, [1.0])[0] + 0.5) <= 1e-12
    assert abs(moment_map(TWO_TERMS, [1e-5])[0]) <= 1e-6
    with pytest.raises(ZeroCoordinate):
        moment_map(TWO_TERMS, [0.0])
    with pytest.raises(ValueError):
        embedding_exponents([[0], [0]])


def test_moment_map_strict_interior():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        a = random_exponents(rng, n)
        P = Polyhedron.from_vrep([tuple(-x for x in r) for r in a.tolist()])
        w = np.exp(rng.uniform(-0.3, 0.3, n)) * np.exp(1j * rng.uniform(0, 6, n))
        mu = moment_map(a, w)
        for normal, b in P.inequalities:
            assert float(np.dot([float(x) for x in normal], mu)) + float(b) > 1e-12


def test_potential_value_examples():
    assert potential_value(Quadratic(2), [1, 2]) == pytest.approx(2.5)
    K = ToricPotential(TWO_TERMS)
    assert potential_value(K, [0.0]) == pytest.approx(math.log(2) / (4 * math.pi), abs=1e-15)
    assert abs(potential_value(K, [50.0])) < 1e-12
    assert potential_value(K, [-10.0]) == pytest.approx(10.0, abs=1e-12)
    # stabilized: no overflow far out
    assert math.isfinite(potential_value(K, [-1e4]))


def test_gradient_identity_examples():
    rep = gradient_identity_check(TWO_TERMS, [0.0])
    assert rep.applicable and rep.max_deviation <= 1e-9
    assert rep.numeric[0] == pytest.approx(-0.5, abs=1e-9)
    rep = gradient_identity_check(Quadratic(1), [0.3])
    assert not rep.applicable and "quadratic" in rep.note
    with pytest.raises(ValueError):
        gradient_identity_check(TWO_TERMS, [0.0], h=1.0)


def test_gradient_identity_random():
    rng = np.random.default_rng(2)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        rep = gradient_identity_check(random_exponents(rng, n), rng.uniform(-2, 2, n), h=1e-5)
        assert rep.max_deviation <= 1e-6


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=3))
def test_legendre_quadratic_self_dual(y):
    yc, val = legendre_dual(Quadratic(len(y)), y)
    assert np.allclose(yc, y)
    assert val == pytest.approx(0.5 * float(np.dot(y, y)), abs=1e-9)


@given(st.floats(-3, 3))
def test_legendre_toric_range(y):
    yc, _ = legendre_dual(ToricPotential(TWO_TERMS), [y])
    assert -1 < yc[0] < 0


def _perturbed(n, A):
    f = lambda y: 0.5 * y @ A @ y + 0.1 * np.sum(np.log(np.cosh(y)))
    g = lambda y: A @ y + 0.1 * np.tanh(y)
    return CustomPotential(n, f, g)


def test_legendre_double_dual():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        M = rng.normal(size=(n, n))
        A = M @ M.T + np.eye(n)
        K = _perturbed(n, A)
        y = rng.uniform(-1, 1, n)
        if np.linalg.cond(K.hessian(y)) > 1e6:
            continue
        yc, val = legendre_dual(K, y)
        back, val2 = legendre_dual(Conjugate(K), yc)
        assert np.max(np.abs(back - y)) <= 1e-5
        assert val + val2 == pytest.approx(float(yc @ y), abs=1e-6)


def test_legendre_rejects_flat():
    K = CustomPotential(1, lambda y: float(y[0]), lambda y: np.array([1.0]))
    with pytest.raises(NotStrictlyConvex):
        legendre_dual(K, [0.0])


def test_rescale_modes():
    Kr = rescale_family(Quadratic(1), 7.0, "simultaneous")
    for y in (-2.0, 0.5, 3.0):
        assert Kr.value([y]) == pytest.approx(y * y / 2)
    K = ToricPotential(TWO_TERMS)
    r = 5.0
    for y in (-0.7, 0.0, 0.4):
        scaled = rescale_family(K, r, "scaled").gradient([r * y])
        assert scaled == pytest.approx(K.gradient([y]), abs=1e-12)
        pull = rescale_family(K, r, "pullback").gradient([r * y])
        assert pull == pytest.approx(K.gradient([y]) / r, abs=1e-12)
        sim = rescale_family(K, r, "simultaneous").gradient([r * y])
        assert sim == pytest.approx(r * K.gradient([y]), abs=1e-12)
        num = np.array([(rescale_family(K, r, "pullback").value([r * y + 1e-6])
                         - rescale_family(K, r, "pullback").value([r * y - 1e-6])) / 2e-6])
        assert num == pytest.approx(pull, abs=1e-7)
    with pytest.raises(ValueError):
        rescale_family(K, 0, "scaled")
    with pytest.raises(ValueError):
        rescale_family(K, 1, "bogus")


def test_pl_limit_examples():
    K = ToricPotential(TWO_TERMS)
    assert abs(K.value([-100.0]) / 100 - 1) <= 0.01
    for r in (1.0, 10.0, 100.0):
        assert 0 <= K.value([r]) / r <= math.log(2) / (4 * math.pi * r)
    rep = pl_limit_check(TWO_TERMS, [100, 200], [[-2, 2]])
    assert rep.within_bound and rep.decreasing
    assert rep.errors[1] <= 0.5 * rep.errors[0] * (1 + 1e-9)


def test_pl_limit_square():
    rep = pl_limit_check(SQUARE, [50, 100, 200], [[-1, 1], [-1, 1]], num=21)
    assert rep.within_bound and rep.decreasing
    for e1, e2 in zip(rep.errors, rep.errors[1:]):
        assert e2 <= 0.5 * e1 * (1 + 1e-9)
    assert rep.fitted_C <= math.log(4) / (4 * math.pi) * (1 + 1e-9)


def test_exact_float_bridge():
    for a in (TWO_TERMS, SQUARE, [[0, 0], [2, 1], [-1, 3]]):
        _, phi = support_function(Polyhedron.from_vrep([tuple(r) for r in a]))
        ys = [tuple(Fraction(i, 3) for i in p) for p in [(-4, 2), (1, 1), (3, -5), (0, 0)]]
        for y in ys:
            y = y[:len(a[0])]
            exact = phi(tuple(-x for x in y))
            approx = pl_limit_function(a, np.array([float(x) for x in y]))[0]
            assert abs(float(exact) - approx) <= 1e-9


def test_sweep_rows():
    K = ToricPotential(SQUARE)
    ys = sample_window([[-1, 1], [0, 1]], 3)
    rows = sweep(K, ys)
    assert len(rows) == 9 and len(rows[0]) == 5
    for row in rows:
        assert row[2] == K.value(row[:2])
