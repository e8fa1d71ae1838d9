import re

import pytest

from tropdlt import semiflat as S
from tropdlt.complexes import Fan, PolyhedralComplex
from tropdlt.corpus import golden_p1, golden_p1_mirror
from tropdlt.errors import DimensionTooHigh
from tropdlt.plfunctions import regular_subdivision_from_heights
from tropdlt.polyhedra import Cone, Polyhedron
from tropdlt.render import RenderSpec, parse_csv, render_manifold, render_svg, sweep_csv


def test_interval():
    svg = render_svg(PolyhedralComplex([Polyhedron.from_vrep([(-1,), (1,)])]))
    assert svg.count("<path") == 1
    assert svg.count("<circle") == 2
    assert "stroke-dasharray" not in svg


def test_square_subdivision_polygons():
    pts = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]
    P, _ = regular_subdivision_from_heights(pts, [0, 0, 0, 1, 1, 3])
    svg = render_svg(P)
    assert svg.count("<polygon") == len(P.maximal_cells)


def test_unbounded_rays_dashed():
    T = golden_p1_mirror()
    svg = render_manifold(T)
    assert svg.count("stroke-dasharray") == 2
    fan = Fan.from_cones([Cone.from_generators([(1, 0), (0, 1)])])
    svg = render_svg(fan)
    assert svg.count("stroke-dasharray") == 2
    assert svg.count("<polygon") == 1


def test_phi_graph_and_labels():
    svg = render_manifold(golden_p1(), RenderSpec(phi_graph=True, labels=True))
    assert 'class="graph"' in svg
    assert "<text" in svg


def test_viewport_clips():
    svg = render_svg(PolyhedralComplex([Polyhedron.from_vrep([(0, 0), (10, 0), (0, 10)])]),
                     RenderSpec(viewport=(0, 1, 0, 1)))
    coords = [float(x) for x in re.findall(r"-?\d+\.?\d*", svg.split("</style>")[1])]
    assert all(-1 <= c <= 401 for c in coords)


@pytest.mark.parametrize("cell", [
    Polyhedron.from_vrep([(0, 0, 0), (1, 0, 0)]),
    Polyhedron.from_vrep([()]),
])
def test_dimension_too_high(cell):
    with pytest.raises(DimensionTooHigh):
        render_svg(PolyhedralComplex([cell]))


def test_csv_round_trip_is_exact():
    a = [(0, 0), (1, 0), (0, 1), (1, 1)]
    K = S.ToricPotential(a)
    rows = S.sweep(K, S.sample_window([[-1, 1], [-1, 1]], 5))
    header, back = parse_csv(sweep_csv(rows, 2))
    assert header == ["y1", "y2", "K", "ycheck1", "ycheck2"]
    assert back == rows
    for r in back:
        assert r[2] == S.potential_value(K, r[:2])
