import random
from fractions import Fraction

import pytest

from tropdlt import linalg as la
from tropdlt.complexes import Fan, PolyhedralComplex
from tropdlt.corpus import golden_p1, golden_p1_mirror, random_manifold
from tropdlt.degeneration import (
    asymptotic_fan,
    central_fiber,
    chart_ring,
    chart_rings,
    duality_check,
    fan_along,
    gluing_check,
    lift_check,
    total_space,
)
from tropdlt.errors import CellNotInComplex, NonIntegralPolarization, NotAVertex
from tropdlt.plfunctions import PLFunction
from tropdlt.polyhedra import Cone, Polyhedron
from tropdlt.tropman import TropicalManifold

pt = Polyhedron.point
seg = lambda a, b: Polyhedron.from_vrep([a, b])
P1_FAN = Fan.from_cones([Cone.from_generators([(1,)]), Cone.from_generators([(-1,)])])


def interval(a=0, b=1, phi=None):
    return TropicalManifold.from_cells([seg((a,), (b,))], phi)


def test_total_space_p1_mirror():
    data = total_space(golden_p1_mirror())
    assert data.delta.vertices == ((0, 0),)
    assert data.delta.recession_cone() == Cone.from_generators([(1, 0), (-1, 1)])


def test_total_space_interval():
    data = total_space(golden_p1())
    assert sorted(data.sigma_fan.rays) == [(-1, 1), (0, 1)]
    two = [c for c in data.sigma_fan.cones if c.dimension == 2]
    assert two == [Cone.from_generators([(-1, 1), (0, 1)])]


def test_total_space_point():
    T = TropicalManifold.from_cells([pt((0,))])
    data = total_space(T)
    assert data.delta == Polyhedron.from_vrep([(0, 0)], rays=[(0, 1)])
    ring = chart_ring(data, (0, 0))
    assert list(ring.hilbert_basis) == [(0, 1)]


def test_total_space_invariants(rng):
    for _ in range(6):
        T = random_manifold(rng, 2)
        data = total_space(T)
        assert sorted(data.delta.vertices) == sorted(
            tuple(v.vertices[0]) + (T.phi(v.vertices[0]),) for v in T.P.vertices)
        for c in data.sigma_fan.cones:
            assert all(r[-1] >= 0 for r in c.rays)
        # height-one slice reproduces the cells
        slices = set()
        for c in data.sigma_fan.maximal_cones:
            sl = Polyhedron.from_hrep([(f[:-1], f[-1]) for f in c.facets], dim=T.dim)
            slices.add(sl)
        assert slices == set(T.P.maximal_cells)


def test_total_space_requires_integral():
    T = interval(0, 2, lambda y: Fraction(1, 2) * y[0])
    with pytest.raises(NonIntegralPolarization):
        total_space(T)


def test_asymptotic_fan():
    assert asymptotic_fan(golden_p1()) == Fan.zero(1)
    assert asymptotic_fan(total_space(golden_p1_mirror())) == P1_FAN
    sc = Cone.from_generators([(1, 0), (-1, 2)])
    fan = Fan.from_cones([Cone.from_generators([(1, 0), (0, 1)]), Cone.from_generators([(0, 1), (-1, 2)])])
    T = TropicalManifold(fan, PLFunction.from_function(fan, lambda n: max(Fraction(0), -n[0])), check=False)
    assert asymptotic_fan(T) == fan
    assert fan.support_cone == sc


def test_asymptotic_fan_recession_cross_check(rng):
    from tropdlt.tropman import dlt
    height0 = Cone.from_inequalities([], [(0, 0, 1)])
    for _ in range(4):
        D = dlt(random_manifold(rng, 2))
        af = asymptotic_fan(D)
        assert set(af.cones) == {c.recession_cone() for c in D.P.cells}
        sliced = {c.intersection(height0).linear_image([(1, 0, 0), (0, 1, 0)])
                  for c in total_space(D).sigma_fan.cones}
        assert sliced == set(af.cones)


def test_fan_along():
    T = golden_p1_mirror()
    assert fan_along(pt((0,)), T) == P1_FAN
    s = T.P.maximal_cells[0]
    assert fan_along(s, T) == Fan.zero(0)
    sq = TropicalManifold.from_cells(
        [Polyhedron.from_vrep([(0, 0), (1, 0), (0, 1)]), Polyhedron.from_vrep([(1, 0), (0, 1), (1, 1)])],
        lambda p: max(Fraction(0), p[0] + p[1] - 1))
    edge = seg((1, 0), (0, 1))
    f = fan_along(edge, sq)
    assert f.ambient_dim == 1 and len(f.rays) == 2
    with pytest.raises(CellNotInComplex):
        fan_along(seg((0, 0), (1, 1)), sq)


def test_central_fiber_examples():
    cf = central_fiber(golden_p1())
    assert [c.toric for c in cf.components] == [seg((-1,), (0,))]
    cf = central_fiber(golden_p1_mirror())
    assert len(cf.components) == 2
    assert len(cf.fan_components) == 1  # the fan picture has one vertex stratum
    zero = [s for s in cf.cone_picture.values() if s.dim == 0]
    assert len(zero) == 1
    assert len(cf.inclusions) == 2
    from tropdlt.plfunctions import regular_subdivision_from_heights
    P, phi = regular_subdivision_from_heights([(0, 0), (1, 0), (0, 1), (1, 1)], [0, 0, 0, 1])
    cf = central_fiber(TropicalManifold(P, phi))
    a, b = cf.components
    assert a.toric.intersection(b.toric).dimension == 1


def test_duality_check_corpus(rng):
    for i in range(6):
        T = random_manifold(rng, 2 if i % 2 else 3)
        rep = duality_check(T)
        assert rep.ok, rep.mismatches
    assert duality_check(golden_p1()).ok
    assert duality_check(golden_p1_mirror()).ok


def test_chart_ring_p1_mirror():
    ring = chart_ring(golden_p1_mirror(), (0, 0))
    assert list(ring.hilbert_basis) == [(-1, 1), (1, 0)]
    assert ring.is_free
    assert ring.t_element == (1, 1)


def test_chart_ring_interval():
    ring = chart_ring(interval(0, 1), (0, 0))
    assert list(ring.hilbert_basis) == [(0, 1), (1, 0)]
    with pytest.raises(NotAVertex):
        chart_ring(interval(0, 1), (5, 0))


def test_chart_rings_rank(rng):
    for _ in range(4):
        T = random_manifold(rng, 2)
        for ring in chart_rings(T):
            assert ring.monoid.cone.is_pointed
            assert ring.monoid.rank == 3
            assert ring.t_element is not None


def test_gluing_examples():
    T = interval(0, 1)
    rep = gluing_check(T, (0,), (1,), seg((0,), (1,)))
    assert rep.ok and not rep.empty_overlap
    assert rep.cone_v == Cone.from_generators([(0, 1)], lines=[(1, 0)])
    assert gluing_check(T, (0,), (0,)).ok
    U = TropicalManifold.from_cells([seg((0,), (1,)), seg((1,), (2,))], lambda y: max(Fraction(0), y[0] - 1))
    rep = gluing_check(U, (0,), (2,))
    assert rep.empty_overlap


def test_gluing_corpus(rng):
    for _ in range(3):
        T = random_manifold(rng, 2)
        data = total_space(T)
        for e in T.P.cells_of_dimension(1):
            v, w = e.vertices
            assert gluing_check(data, v, w, e).ok
            for s in T.P.maximal_star(e):
                assert gluing_check(data, v, w, s).ok


def test_gluing_cocycle_on_triangles(rng):
    T = random_manifold(rng, 2, sizes=[1, 1], translate=False)
    data = total_space(T)
    for s in T.P.maximal_cells:
        vs = s.vertices
        cones = {v: gluing_check(data, v, vs[0], s).cone_v for v in vs}
        assert len(set(cones.values())) == 1


def test_lift_check():
    T = interval(0, 1)
    w = lift_check(T, T.P.maximal_cells[0])
    assert w.verified and w.slope == (0,) and w.const == 0
    T = interval(0, 1, lambda y: y[0])
    w = lift_check(T, T.P.maximal_cells[0])
    assert w.verified
    # (m, r) -> (m, r + m) on the embedded coordinates
    assert la.matvec(w.embedding, (1, 1)) == (1, 1, 1)
    assert w.source.rays == ((0, 1), (1, 1))


def test_lift_check_random(rng):
    for _ in range(5):
        T = random_manifold(rng, 2)
        for s in T.P.maximal_cells:
            assert lift_check(T, s).verified
    with pytest.raises(NonIntegralPolarization):
        lift_check(interval(0, 2, lambda y: Fraction(1, 2) * y[0]), seg((0,), (2,)))
