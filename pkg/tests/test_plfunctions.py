import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropdlt import linalg as la
from tropdlt.complexes import Fan, PolyhedralComplex
from tropdlt.corpus import random_lattice_polytope
from tropdlt.errors import DegenerateInput, NotConvex, NotFullDimensional, UnboundedInput
from tropdlt.plfunctions import (
    PLFunction,
    convexity_check,
    homogenize,
    normal_fan,
    pl_from_ray_values,
    polytope_from_pl,
    regular_subdivision_from_heights,
    support_function,
)
from tropdlt.polyhedra import Cone, Polyhedron

from oracles import support_oracle

P1_FAN = Fan.from_cones([Cone.from_generators([(1,)]), Cone.from_generators([(-1,)])])
SQUARE = Polyhedron.from_vrep([(0, 0), (1, 0), (0, 1), (1, 1)])


def p1_phi(a, b):
    return pl_from_ray_values(P1_FAN, {(1,): a, (-1,): b})


def test_support_function_p1():
    fan, phi = support_function(Polyhedron.from_vrep([(-1,), (0,)]))
    assert fan == P1_FAN
    assert phi((1,)) == 0 and phi((-1,)) == 1
    assert sorted(c.dimension for c in fan.cells) == [0, 1, 1]


def test_support_function_point():
    fan, phi = support_function(Polyhedron.point((2, -1)))
    assert len(fan.maximal_cells) == 1 and fan.maximal_cells[0].dimension == 2
    assert phi((3, 5)) == 1


def test_support_function_square_lp_oracle():
    fan, phi = support_function(SQUARE)
    assert len(fan.maximal_cells) == 4
    rng = random.Random(0)
    for _ in range(100):
        n = (rng.randint(-9, 9), rng.randint(-9, 9))
        assert phi(n) == support_oracle(SQUARE.vertices, n)


def test_support_function_random_oracle(rng):
    for _ in range(6):
        P = random_lattice_polytope(rng, rng.choice([2, 3]))
        _, phi = support_function(P)
        for _ in range(100):
            n = tuple(rng.randint(-6, 6) for _ in range(P.dim))
            assert phi(n) == support_oracle(P.vertices, n)


def test_support_function_unbounded():
    with pytest.raises(UnboundedInput):
        support_function(Polyhedron.from_vrep([(0,)], rays=[(1,)]))


def test_polytope_from_pl_examples():
    assert polytope_from_pl(P1_FAN, p1_phi(0, 1)) == Polyhedron.from_vrep([(-1,), (0,)])
    fan, _ = support_function(SQUARE)
    lin = PLFunction.from_function(fan, lambda n: 2 * n[0] - n[1])
    assert polytope_from_pl(fan, lin) == Polyhedron.point((2, -1))
    with pytest.raises(NotConvex):
        polytope_from_pl(P1_FAN, p1_phi(0, -1))


def test_round_trip_reflexive_polygon():
    hexagon = Polyhedron.from_vrep([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)])
    assert polytope_from_pl(*support_function(hexagon)) == hexagon


def test_round_trips_random(rng):
    for _ in range(12):
        P = random_lattice_polytope(rng, rng.choice([2, 3]))
        fan, phi = support_function(P)
        assert polytope_from_pl(fan, phi) == P
        fan2, phi2 = support_function(polytope_from_pl(fan, phi))
        assert fan2 == fan and phi2 == phi


def test_convexity_examples():
    _, phi = support_function(SQUARE)
    rep = convexity_check(phi)
    assert rep.convex and rep.strictly_convex
    flat = p1_phi(1, -1)  # linear: equal slopes on both sides
    rep = convexity_check(flat)
    assert rep.convex and not rep.strictly_convex
    rep = convexity_check(p1_phi(0, -1))
    assert not rep.convex
    assert rep.violating_wall == Polyhedron.point((0,))
    assert p1_phi(0, -1).bends[0].value == -1


def _ray_line():
    return PolyhedralComplex([Polyhedron.from_vrep([(0,), (1,)]),
                                         Polyhedron.from_vrep([(1,)], rays=[(1,)])])


def test_homogenize_zero():
    cx = PolyhedralComplex([Polyhedron.from_vrep([(-1,), (0,)])])
    fan, H = homogenize(cx, PLFunction.zero(cx))
    assert sorted(fan.rays) == [(-1, 1), (0, 1)]
    assert all(H(r) == 0 for r in fan.rays)


def test_homogenize_break():
    cx = _ray_line()
    phi = PLFunction.from_function(cx, lambda y: max(Fraction(0), y[0] - 1))
    fan, H = homogenize(cx, phi)
    assert len(fan.maximal_cells) == 2
    assert sorted(fan.rays) == [(0, 1), (1, 0), (1, 1)]
    for m, r in [(Fraction(1, 2), 1), (3, 2), (7, 1), (5, 3)]:
        assert H((m, r)) == r * phi((Fraction(m) / r,))
    assert convexity_check(H).convex


@given(st.fractions(min_value=-3, max_value=3), st.integers(1, 5))
def test_homogenize_degree_one(y, k):
    cx = PolyhedralComplex([Polyhedron.from_vrep([(-3,), (0,)]),
                                       Polyhedron.from_vrep([(0,), (3,)])])
    phi = PLFunction.from_function(cx, lambda x: abs(x[0]))
    _, H = homogenize(cx, phi)
    assert H((k * y, k)) == k * H((y, 1))
    assert H((y, 1)) == phi((y,))


def test_homogenize_rejects_concave():
    cx = PolyhedralComplex([Polyhedron.from_vrep([(-1,), (0,)]),
                                       Polyhedron.from_vrep([(0,), (1,)])])
    with pytest.raises(NotConvex):
        homogenize(cx, PLFunction.from_function(cx, lambda x: -abs(x[0])))


def test_regular_subdivision_examples():
    P, phi = regular_subdivision_from_heights([(0,), (1,), (2,), (3,)], [0, 1, 4, 9])
    assert sorted(c.vertices for c in P.maximal_cells) == [((0,), (1,)), ((1,), (2,)), ((2,), (3,))]
    assert convexity_check(phi).strictly_convex
    P, _ = regular_subdivision_from_heights([(0,), (1,), (2,), (3,)], [0, 0, 0, 0])
    assert len(P.maximal_cells) == 1
    for k in range(1, 6):
        P, _ = regular_subdivision_from_heights([(i,) for i in range(k + 1)])
        assert len(P.maximal_cells) == k
        assert all(c.vertices[1][0] - c.vertices[0][0] == 1 for c in P.maximal_cells)
    with pytest.raises(DegenerateInput):
        regular_subdivision_from_heights([(0,), (0,)], [0, 1])


def test_regular_subdivision_square():
    pts = [(0, 0), (1, 0), (0, 1), (1, 1)]
    P, phi = regular_subdivision_from_heights(pts, [0, 0, 0, 1])
    assert len(P.maximal_cells) == 2
    assert all(len(c.vertices) == 3 for c in P.maximal_cells)
    assert all(phi(p) == h for p, h in zip(pts, [0, 0, 0, 1]))


def test_normal_fan():
    assert normal_fan(Polyhedron.from_vrep([(0,), (1,)])) == P1_FAN
    quads = normal_fan(SQUARE)
    assert sorted(c.rays for c in quads.maximal_cones) == sorted(
        Cone.from_generators(g).rays for g in
        [[(1, 0), (0, 1)], [(-1, 0), (0, 1)], [(1, 0), (0, -1)], [(-1, 0), (0, -1)]])
    with pytest.raises(NotFullDimensional):
        normal_fan(Polyhedron.from_vrep([(0, 0), (1, 0)]))


def test_normal_fan_scale_invariance(rng):
    simplex = Polyhedron.from_vrep([(0, 0), (1, 0), (0, 1)])
    assert normal_fan(simplex.scaled(3)) == normal_fan(simplex)
    for _ in range(8):
        P = random_lattice_polytope(rng, rng.choice([2, 3]))
        assert normal_fan(P.scaled(rng.randint(2, 4))) == normal_fan(P)


def test_pl_function_invariants():
    _, phi = support_function(SQUARE)
    assert phi.is_well_defined() and phi.is_homogeneous and phi.is_integral
    psi = phi.add_affine((1, 2), 3)
    assert psi((1, 1)) == phi((1, 1)) + 6
    assert [b.value for b in psi.bends] == [b.value for b in phi.bends]
    half = phi.scaled(Fraction(1, 2))
    assert not half.is_integral or all(
        la.as_fraction(x).denominator == 1 for s in half.pieces.values() for x in s[0])
