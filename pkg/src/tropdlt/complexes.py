"""Polyhedral complexes and fans.

A complex stores every cell (all faces of the maximal cells), so face
relations and stars are plain lookups.  A fan is a complex whose cells are
cones, i.e. polyhedra with the single vertex 0.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la
from .errors import CellNotInComplex
from .polyhedra import Cone, Polyhedron


class PolyhedralComplex:
    """A finite set of polyhedra closed under taking faces."""

    def __init__(self, maximal_cells: Iterable[Polyhedron]):
        maximal_cells = list(maximal_cells)
        if not maximal_cells:
            raise ValueError("a complex needs at least one cell")
        cells: set[Polyhedron] = set()
        for c in maximal_cells:
            cells.update(c.faces())
        self.cells = tuple(sorted(cells))
        uniq = sorted(set(maximal_cells), key=lambda c: -c.dimension)
        top = []
        for c in uniq:
            if not any(c in d._face_set for d in top):
                top.append(c)
        self._maximal = tuple(sorted(top))
        self.ambient_dim = maximal_cells[0].dim
        self._index = {c: i for i, c in enumerate(self.cells)}

    @classmethod
    def from_cells(cls, cells: Iterable[Polyhedron]) -> "PolyhedralComplex":
        """Build from an explicit cell list, which is *not* completed under faces.

        Used by validation tests that need deliberately broken complexes.
        """
        obj = cls.__new__(cls)
        cells = sorted(set(cells))
        obj.cells = tuple(cells)
        obj.ambient_dim = cells[0].dim
        obj._index = {c: i for i, c in enumerate(cells)}
        return obj

    def __repr__(self):
        return f"{type(self).__name__}({len(self.maximal_cells)} maximal cells, dim={self.dimension})"

    def __eq__(self, other):
        return isinstance(other, PolyhedralComplex) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell):
        return cell in self._index

    def index(self, cell: Polyhedron) -> int:
        try:
            return self._index[cell]
        except KeyError:
            raise CellNotInComplex(f"{cell!r} is not a cell of the complex") from None

    @property
    def dimension(self) -> int:
        return max(c.dimension for c in self.cells)

    @cached_property
    def maximal_cells(self) -> tuple[Polyhedron, ...]:
        if getattr(self, "_maximal", None) is not None:
            return self._maximal
        out = []
        for c in self.cells:
            if not any(c != d and c.is_face_of(d) for d in self.cells if d.dimension > c.dimension):
                out.append(c)
        return tuple(out)

    def cells_of_dimension(self, d: int) -> list[Polyhedron]:
        return [c for c in self.cells if c.dimension == d]

    @property
    def vertices(self) -> list[Polyhedron]:
        return self.cells_of_dimension(0)

    @property
    def is_pure(self) -> bool:
        d = self.dimension
        return all(c.dimension == d for c in self.maximal_cells)

    @property
    def is_bounded(self) -> bool:
        return all(c.is_bounded for c in self.cells)

    def star(self, cell: Polyhedron) -> list[Polyhedron]:
        """Cells having ``cell`` as a face (including itself)."""
        self.index(cell)
        return [d for d in self.cells if cell.is_face_of(d)]

    def maximal_star(self, cell: Polyhedron) -> list[Polyhedron]:
        self.index(cell)
        return [s for s in self.maximal_cells if cell.is_face_of(s)]

    def faces_of(self, cell: Polyhedron) -> list[Polyhedron]:
        return [f for f in cell.faces() if f in self._index]

    def cell_containing(self, x: Sequence) -> Polyhedron | None:
        """A maximal cell containing ``x``, or None."""
        for s in self.maximal_cells:
            if s.contains(x):
                return s
        return None

    def minimal_cell_containing(self, x: Sequence) -> Polyhedron | None:
        for c in self.cells:  # sorted by dimension
            if c.contains(x):
                return c
        return None

    @cached_property
    def support_hull(self) -> Polyhedron:
        """Convex hull of the union of the cells."""
        verts, rays, lines = [], [], []
        for s in self.maximal_cells:
            verts.extend(s.vertices)
            rays.extend(s.rays)
            lines.extend(s.lines)
        return Polyhedron.from_vrep(verts, rays, lines, self.ambient_dim)

    def walls(self) -> list[tuple[Polyhedron, list[Polyhedron]]]:
        """Codimension-one cells with the maximal cells containing them."""
        d = self.dimension
        return [(w, self.maximal_star(w)) for w in self.cells_of_dimension(d - 1)]

    def interior_walls(self) -> list[tuple[Polyhedron, Polyhedron, Polyhedron]]:
        return [(w, st[0], st[1]) for w, st in self.walls() if len(st) == 2]

    def translate(self, t: Sequence) -> "PolyhedralComplex":
        return type(self)(c.translate(t) for c in self.maximal_cells)

    def affine_image(self, matrix, translation) -> "PolyhedralComplex":
        return type(self)(c.affine_image(matrix, translation) for c in self.maximal_cells)


def cone_cell(cone: Cone) -> Polyhedron:
    """A cone as a polyhedron with apex 0."""
    return Polyhedron(Cone.from_generators(
        [(0,) * cone.dim + (1,)] + [r + (0,) for r in cone.rays],
        [l + (0,) for l in cone.lines], cone.dim + 1))


class Fan(PolyhedralComplex):
    """A complex of cones; cells are polyhedra with apex 0."""

    @classmethod
    def from_cones(cls, cones: Iterable[Cone]) -> "Fan":
        return cls(cone_cell(c) for c in cones)

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence], cones: Iterable[Sequence[int]],
                  dim: int | None = None) -> "Fan":
        """Fan with maximal cones given as index lists into ``rays``."""
        return cls.from_cones(Cone.from_generators([rays[i] for i in c], dim=dim or len(rays[0]))
                              for c in cones)

    @classmethod
    def zero(cls, n: int) -> "Fan":
        return cls.from_cones([Cone.zero(n)])

    @property
    def dim(self) -> int:
        return self.ambient_dim

    @cached_property
    def cones(self) -> tuple[Cone, ...]:
        return tuple(c.recession_cone() for c in self.cells)

    @cached_property
    def maximal_cones(self) -> tuple[Cone, ...]:
        return tuple(c.recession_cone() for c in self.maximal_cells)

    @cached_property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        """Primitive generators of the one-dimensional cones (pointed fans)."""
        return tuple(sorted(c.rays[0] for c in self.cells
                            if c.dimension == 1 and not c.lines))

    @cached_property
    def is_complete(self) -> bool:
        n = self.ambient_dim
        if not all(c.dimension == n for c in self.maximal_cells):
            return False
        return all(len(st) == 2 for _, st in self.walls()) if n > 0 else True

    @property
    def support_cone(self) -> Cone:
        return self.support_hull.recession_cone()

    def refines(self, cone: Cone) -> bool:
        """Whether the cones of the fan cover exactly ``cone`` (pure, walls matched)."""
        if self.support_cone != cone:
            return False
        d = cone.dimension
        if not all(c.dimension == d for c in self.maximal_cells):
            return False
        for w, st in self.walls():
            inner = cone.contains_in_relative_interior(w.relative_interior_point)
            if len(st) != (2 if inner else 1):
                return False
        return True

    def cone_containing(self, x: Sequence) -> Cone | None:
        c = self.cell_containing(x)
        return None if c is None else c.recession_cone()


def is_cone_cell(p: Polyhedron) -> bool:
    return len(p.vertices) == 1 and la.is_zero(p.vertices[0])
