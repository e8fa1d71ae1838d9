import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropdlt import linalg as la
from tropdlt.corpus import random_cone, random_lattice_polytope, random_pointed_cone
from tropdlt.errors import NotFullDimensional, UnboundedInput
from tropdlt.polyhedra import (
    Cone,
    Polyhedron,
    cone_over_polytope,
    cone_properties,
    convert_representation,
    dual_cone,
    face_data,
    interior_lattice_points,
    primitive,
)

from oracles import brute_facets, hull_facet_count, hull_vertices, interior_scan

SQUARE = Polyhedron.from_vrep([(0, 0), (1, 0), (0, 1), (1, 1)])


def simplex(n, k=1):
    pts = [tuple(0 for _ in range(n))] + [tuple(k * int(i == j) for j in range(n)) for i in range(n)]
    return Polyhedron.from_vrep(pts)


def test_primitive_examples():
    assert primitive((6, 4)) == (3, 2)
    assert primitive((0, 0, -3)) == (0, 0, -1)


def test_convert_h_to_v_simplex():
    rep = {"kind": "polyhedron", "inequalities": [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)]}
    out = convert_representation(rep)
    assert sorted(out["vertices"]) == [(0, 0), (0, 1), (1, 0)]
    assert out["rays"] == [] and out["lines"] == []


def test_convert_v_to_h_cone():
    out = convert_representation({"kind": "cone", "rays": [(0, 1), (3, 1)]})
    assert sorted(out["inequalities"]) == [(-1, 3), (1, 0)]
    assert sorted(out["inequalities"]) == brute_facets([(0, 1), (3, 1)])


def test_convert_round_trip(rng):
    for _ in range(20):
        P = random_lattice_polytope(rng, rng.choice([2, 3]))
        h = convert_representation({"kind": "polyhedron", "vertices": P.vertices})
        v = convert_representation({"kind": "polyhedron", **h})
        assert sorted(v["vertices"]) == sorted(P.vertices)


@pytest.mark.parametrize("gens,expected", [
    ([(1, 0), (0, 1)], [(0, 1), (1, 0)]),
    ([(0, 1), (3, 1)], [(-1, 3), (1, 0)]),
    ([(1, 0), (-1, 2)], [(0, 1), (2, 1)]),
])
def test_dual_cone_examples(gens, expected):
    D = dual_cone(Cone.from_generators(gens))
    assert sorted(D.rays) == expected
    assert not D.lines


def test_dual_cone_negate():
    D = dual_cone(Cone.orthant(2), negate=True)
    assert sorted(D.rays) == [(-1, 0), (0, -1)]


def test_dual_cone_tightness_oracle(rng):
    # every dual ray is nonnegative on the generators and tight on a facet's worth of them
    for _ in range(30):
        d = rng.choice([2, 3])
        C = random_pointed_cone(rng, d)
        assert sorted(dual_cone(C).rays) == brute_facets(list(C.rays))


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5])
def test_dual_involution(dim):
    rng = random.Random(dim)
    for _ in range(12):
        C = random_cone(rng, dim)
        assert dual_cone(dual_cone(C)) == C


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=5))
def test_dual_involution_property(gens):
    gens = [g for g in gens if any(g)]
    if not gens:
        return
    C = Cone.from_generators(gens)
    assert C.dual().dual() == C
    for r in C.dual().rays:
        assert all(la.dot(r, g) >= 0 for g in gens)


def test_cone_over_polytope():
    assert cone_over_polytope(Polyhedron.from_vrep([(0,), (1,)])) == Cone.from_generators([(0, 1), (1, 1)])
    assert cone_over_polytope(Polyhedron.from_vrep([(-1,), (0,)]), negate=True) == \
        Cone.from_generators([(0, 1), (1, 1)])
    C = cone_over_polytope(SQUARE)
    assert len(C.rays) == 4 and C.dim == 3
    # slice at height one is the square again
    sl = Polyhedron.from_hrep([(f[:2], f[2]) for f in C.facets], dim=2)
    assert sl == SQUARE
    with pytest.raises(UnboundedInput):
        cone_over_polytope(Polyhedron.from_vrep([(0,)], rays=[(1,)]))


def test_face_data_examples():
    poset, rec = face_data(simplex(2))
    assert poset.counts() == {0: 3, 1: 3, 2: 1}
    _, rec = face_data(Polyhedron.from_vrep([(0, 0)], rays=[(1, 0), (0, 1)]))
    assert rec == Cone.orthant(2)
    P = Polyhedron.from_vrep([(0, 0), (1, 0)], rays=[(0, 1)])
    unbounded = [f for f in P.faces(1) if not f.is_bounded]
    assert sorted((f.vertices, f.rays) for f in unbounded) == [
        (((0, 0),), ((0, 1),)), (((1, 0),), ((0, 1),))]


def test_face_poset_closed_under_intersection(rng):
    for _ in range(10):
        P = random_lattice_polytope(rng, 3)
        poset, _ = face_data(P)
        faces = set(poset.faces)
        for f, g in itertools.combinations(poset.faces, 2):
            m = poset.meet(f, g)
            assert m is None or m in faces


def test_euler_characteristic(rng):
    for _ in range(15):
        d = rng.choice([2, 3])
        P = random_lattice_polytope(rng, d)
        counts = face_data(P)[0].counts()
        assert sum((-1) ** k * c for k, c in counts.items()) == 1


def test_vertices_and_facets_match_scipy(rng):
    for _ in range(25):
        d = rng.choice([2, 3])
        pts = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(d + 4)]
        P = Polyhedron.from_vrep(pts)
        if not P.is_full_dimensional:
            continue
        assert sorted(P.vertices) == hull_vertices(pts)
        assert len(P.facets()) == hull_facet_count(pts)


def test_interior_lattice_points_examples():
    assert interior_lattice_points(SQUARE) == []
    assert interior_lattice_points(simplex(2, 3)) == [(1, 1)]
    assert interior_lattice_points(Polyhedron.from_vrep([(0,), (4,)])) == [(1,), (2,), (3,)]
    with pytest.raises(NotFullDimensional):
        interior_lattice_points(Polyhedron.from_vrep([(0, 0), (1, 1)]))


def test_interior_points_oracle(rng):
    for _ in range(20):
        P = random_lattice_polytope(rng, rng.choice([2, 3]))
        pts = interior_lattice_points(P)
        assert pts == interior_scan(list(P.vertices))
        boundary = {p for f in P.facets() for p in f.lattice_points()}
        assert pts == sorted(set(P.lattice_points()) - boundary)


def test_cone_properties_examples():
    p = cone_properties(Cone.orthant(2))
    assert p["smooth"] and p["pointed"] and p["full_dimensional"]
    assert p["gorenstein_height"] == (1, 1)
    p = cone_properties(Cone.from_generators([(0, 1), (3, 1)]))
    assert not p["smooth"] and p["gorenstein_height"] == (0, 1)
    p = cone_properties(Cone.from_generators([(1, 0), (1, 2)]))
    assert not p["smooth"]
    assert cone_properties(Cone.from_generators([(1, 0), (2, 3)]))["gorenstein_height"] is None


def test_gorenstein_height_one_hilbert_elements_in_delta(rng):
    from tropdlt.hilbert import hilbert_basis
    for _ in range(8):
        D = random_lattice_polytope(rng, 2, bound=1)
        C = cone_over_polytope(D)
        h = cone_properties(C)["gorenstein_height"]
        assert h == (0, 0, 1)
        for b in hilbert_basis(C):
            if la.dot(h, b) == 1:
                assert D.contains(b[:2])


def test_rational_polyhedron_and_membership():
    P = Polyhedron.from_hrep([((2, 0), 0), ((-2, 0), 1), ((0, 1), 0), ((0, -1), 1)])
    assert sorted(P.vertices) == [(0, 0), (0, 1), (Fraction(1, 2), 0), (Fraction(1, 2), 1)]
    assert not P.is_lattice
    assert P.contains((Fraction(1, 4), Fraction(1, 2)))
    assert P.contains_in_relative_interior((Fraction(1, 4), Fraction(1, 2)))
    assert not P.contains_in_relative_interior((0, Fraction(1, 2)))


def test_faces_agree_with_dd(rng):
    # faces built from tight sets equal faces rebuilt from their generators
    for _ in range(30):
        C = random_cone(rng, rng.choice([2, 3, 4]))
        for F in C.faces():
            assert F == Cone.from_generators(F.rays, F.lines, C.dim)
