"""SVG pictures of 1-D and 2-D complexes and CSV tables of numeric sweeps.

Unbounded cells are cut at the viewport; the cut edges along rays are drawn
dashed.  Coordinates are only converted to floats when written out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .complexes import PolyhedralComplex
from .errors import DimensionTooHigh
from .polyhedra import Polyhedron
from .tropman import TropicalManifold

SIZE = 400
PAD = 20


@dataclass
class RenderSpec:
    target: str = "svg"
    viewport: tuple | None = None  # (xmin, xmax, ymin, ymax)
    labels: bool = False
    phi_graph: bool = False


def _fmt(x: float) -> str:
    s = f"{x:.6g}"
    return "0" if s == "-0" else s


def _auto_viewport(cells: Sequence[Polyhedron], dim: int) -> tuple:
    pts = [v for c in cells for v in c.vertices]
    lo = [min(Fraction(p[i]) for p in pts) for i in range(dim)]
    hi = [max(Fraction(p[i]) for p in pts) for i in range(dim)]
    unbounded = any(not c.is_bounded for c in cells)
    margin = [max(Fraction(1), (h - l) / 2) if unbounded else max(Fraction(1, 2), (h - l) / 10)
              for l, h in zip(lo, hi)]
    box = []
    for i in range(dim):
        box += [lo[i] - margin[i], hi[i] + margin[i]]
    if dim == 1:
        box += [Fraction(-1), Fraction(1)]
    return tuple(box)


def _box(vp, dim) -> Polyhedron:
    ineqs = []
    for i in range(dim):
        e = tuple(int(i == j) for j in range(dim))
        ineqs.append((e, -vp[2 * i]))
        ineqs.append((la.neg(e), vp[2 * i + 1]))
    return Polyhedron.from_hrep(ineqs, dim=dim)


class _Canvas:
    def __init__(self, vp):
        self.vp = [float(x) for x in vp]
        self.items: list[str] = []

    def xy(self, p) -> tuple[float, float]:
        x0, x1, y0, y1 = self.vp
        x = float(p[0])
        y = float(p[1]) if len(p) > 1 else 0.0
        sx = PAD + (x - x0) / (x1 - x0) * (SIZE - 2 * PAD)
        sy = SIZE - PAD - (y - y0) / (y1 - y0) * (SIZE - 2 * PAD)
        return sx, sy

    def polygon(self, pts, cls):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(self.xy, pts))
        self.items.append(f'<polygon class="{cls}" points="{coords}"/>')

    def path(self, pts, cls, dashed=False):
        d = " ".join(("M" if i == 0 else "L") + f"{_fmt(x)} {_fmt(y)}"
                     for i, (x, y) in enumerate(map(self.xy, pts)))
        extra = ' stroke-dasharray="6 4"' if dashed else ""
        self.items.append(f'<path class="{cls}" d="{d}"{extra}/>')

    def mark(self, p):
        x, y = self.xy(p)
        self.items.append(f'<circle class="vertex" cx="{_fmt(x)}" cy="{_fmt(y)}" r="3"/>')

    def label(self, p, text):
        x, y = self.xy(p)
        self.items.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}">{text}</text>')

    def svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">\n'
                '<style>polygon{fill:#dde6f0;stroke:#223;stroke-width:1}'
                'path{fill:none;stroke:#223;stroke-width:1.5}'
                'path.graph{stroke:#a33}circle{fill:#223}text{font:10px sans-serif}</style>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def _ordered_polygon(p: Polyhedron) -> list:
    """Vertices of a bounded 2-D polygon in boundary order."""
    verts = list(p.vertices)
    adj = {v: [] for v in verts}
    for e in p.faces(1):
        a, b = e.vertices
        adj[a].append(b)
        adj[b].append(a)
    out = [verts[0]]
    prev = None
    while len(out) < len(verts):
        nxt = next(w for w in adj[out[-1]] if w != prev)
        prev = out[-1]
        out.append(nxt)
    return out


def _ray_edges(cell: Polyhedron, box: Polyhedron) -> list:
    """Segments from a vertex along a ray of ``cell``, cut at the box."""
    segs = []
    for e in cell.faces(1):
        if e.is_bounded:
            continue
        cut = e.intersection(box)
        if cut is not None and cut.dimension == 1:
            segs.append(list(cut.vertices))
    return segs


def render_svg(P: PolyhedralComplex, spec: RenderSpec | None = None,
               phi=None) -> str:
    spec = spec or RenderSpec()
    dim = P.ambient_dim
    if dim > 2:
        raise DimensionTooHigh(f"cannot draw a {dim}-dimensional complex")
    if dim == 0:
        raise DimensionTooHigh("nothing to draw in dimension 0")
    vp = spec.viewport or _auto_viewport(P.maximal_cells, dim)
    vp = tuple(Fraction(x).limit_denominator(10**6) if isinstance(x, float) else Fraction(x)
               for x in vp)
    box = _box(vp[:2 * dim], dim)
    graph = None
    if spec.phi_graph and phi is not None and dim == 1:
        xs = set()
        for c in P.maximal_cells:
            cut = c.intersection(box)
            if cut is not None:
                xs.update(v[0] for v in cut.vertices)
        graph = [(x, phi((x,))) for x in sorted(xs)]
        ys = [y for _, y in graph]
        vp = vp[:2] + (min(min(ys), vp[2]) - 1, max(max(ys), vp[3]) + 1)
    cv = _Canvas(vp)
    for i, c in enumerate(P.maximal_cells):
        cut = c.intersection(box)
        if cut is None:
            continue
        if cut.dimension == 2:
            cv.polygon(_ordered_polygon(cut), "cell")
        elif cut.dimension == 1 and c.is_bounded:
            cv.path(list(cut.vertices), "cell")  # unbounded edges are drawn dashed below
        if spec.labels:
            cv.label(cut.barycenter, str(i))
    for c in P.cells:
        if c.dimension == 1 and not c.is_bounded:
            for seg in _ray_edges(c, box):
                cv.path(seg, "ray", dashed=True)
    for v in P.vertices:
        if box.contains(v.vertices[0]):
            cv.mark(v.vertices[0])
    if graph:
        cv.path(graph, "graph")
    return cv.svg()


def render_manifold(T: TropicalManifold, spec: RenderSpec | None = None) -> str:
    return render_svg(T.P, spec, T.phi)


def csv_table(rows: Sequence[Sequence[float]], header: Sequence[str]) -> str:
    """Rows with every value at 17 significant digits, so floats survive a round trip."""
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(f"{float(x):.17g}" for x in r))
    return "\n".join(lines) + "\n"


def sweep_csv(rows: Sequence[Sequence[float]], dim: int) -> str:
    header = ([f"y{i + 1}" for i in range(dim)] + ["K"]
              + [f"ycheck{i + 1}" for i in range(dim)])
    return csv_table(rows, header)


def parse_csv(text: str) -> tuple[list[str], list[list[float]]]:
    lines = text.strip().splitlines()
    return lines[0].split(","), [[float(x) for x in l.split(",")] for l in lines[1:]]
