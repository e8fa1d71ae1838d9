"""Piecewise-affine functions on complexes, support functions and convexity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg as la
from .complexes import Fan, PolyhedralComplex, cone_cell
from .errors import (
    DegenerateInput,
    NotConvex,
    NotFullDimensional,
    UnboundedInput,
)
from .polyhedra import Cone, Polyhedron

Piece = tuple[tuple[Fraction, ...], Fraction]


def _affine_frame(cell: Polyhedron):
    """A base point and spanning directions of the affine hull of ``cell``."""
    v0 = cell.vertices[0]
    return v0, cell.direction_space


def canonical_piece(cell: Polyhedron, slope: Sequence, const) -> Piece:
    """Normal form of an affine function restricted to ``aff(cell)``.

    The slope is projected orthogonally onto the direction space of the cell
    and the constant adjusted so the value at the first vertex is unchanged.
    """
    s = la.as_vector(slope)
    c = la.as_fraction(const)
    v0, dirs = _affine_frame(cell)
    s2 = la.project_onto(s, dirs) if dirs else tuple(Fraction(0) for _ in s)
    return s2, la.dot(s, v0) + c - la.dot(s2, v0)


@dataclass(frozen=True)
class Bend:
    wall: Polyhedron
    cells: tuple[Polyhedron, Polyhedron]
    normal: tuple[int, ...]
    value: Fraction


class PLFunction:
    """A piecewise-affine function given by one affine piece per maximal cell.

    ``pieces`` maps each maximal cell to ``(slope, constant)`` so that the
    function is ``x -> slope.x + constant`` on that cell.
    """

    def __init__(self, domain: PolyhedralComplex, pieces: Mapping[Polyhedron, tuple]):
        self.domain = domain
        missing = [s for s in domain.maximal_cells if s not in pieces]
        if missing:
            raise ValueError(f"no affine piece given for {missing[0]!r}")
        self.pieces = {s: canonical_piece(s, *pieces[s]) for s in domain.maximal_cells}

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_function(cls, domain: PolyhedralComplex, f: Callable) -> "PLFunction":
        """Interpolate an exact function that is affine on each maximal cell."""
        pieces = {}
        for s in domain.maximal_cells:
            v0 = s.vertices[0]
            f0 = la.as_fraction(f(v0))
            rows, rhs = [], []
            # directions that stay inside the cell
            for d in [la.sub(v, v0) for v in s.vertices[1:]] + list(s.rays) + list(s.lines):
                if la.rank(rows + [d]) == len(rows) + 1:
                    rows.append(d)
                    rhs.append(la.as_fraction(f(la.add(v0, d))) - f0)
            slope = la.solve(rows, rhs) if rows else tuple(Fraction(0) for _ in v0)
            if slope is None:
                raise ValueError("function is not affine on a cell")
            pieces[s] = (slope, f0 - la.dot(slope, v0))
        return cls(domain, pieces)

    @classmethod
    def zero(cls, domain: PolyhedralComplex) -> "PLFunction":
        n = domain.ambient_dim
        return cls(domain, {s: ((0,) * n, 0) for s in domain.maximal_cells})

    @classmethod
    def from_vertex_values(cls, domain: PolyhedralComplex, values: Mapping) -> "PLFunction":
        """For bounded simplicial-enough complexes: values at vertices determine pieces."""
        vals = {tuple(la.as_vector(k)): la.as_fraction(v) for k, v in values.items()}
        pieces = {}
        for s in domain.maximal_cells:
            if not s.is_bounded:
                raise UnboundedInput("vertex values do not determine a piece on an unbounded cell")
            v0 = s.vertices[0]
            rows = [la.sub(v, v0) for v in s.vertices[1:]]
            rhs = [vals[v] - vals[v0] for v in s.vertices[1:]]
            slope = la.solve(rows, rhs) if rows else tuple(Fraction(0) for _ in v0)
            if slope is None:
                raise NotConvex("vertex values are not affine on a cell")
            pieces[s] = (slope, vals[v0] - la.dot(slope, v0))
        return cls(domain, pieces)

    # -- evaluation --------------------------------------------------------

    def __repr__(self):
        return f"PLFunction({len(self.pieces)} pieces)"

    def __eq__(self, other):
        return (isinstance(other, PLFunction) and self.domain == other.domain
                and self.pieces == other.pieces)

    def __hash__(self):
        return hash((self.domain, tuple(sorted(self.pieces.items()))))

    def piece(self, cell: Polyhedron) -> Piece:
        """The affine piece on a maximal cell containing ``cell``."""
        if cell in self.pieces:
            return self.pieces[cell]
        star = self.domain.maximal_star(cell)
        return self.pieces[star[0]]

    def slope(self, cell: Polyhedron) -> tuple[Fraction, ...]:
        return self.piece(cell)[0]

    def __call__(self, x: Sequence) -> Fraction:
        x = la.as_vector(x)
        s = self.domain.cell_containing(x)
        if s is None:
            raise ValueError(f"{x} lies outside the domain")
        slope, c = self.pieces[s]
        return la.dot(slope, x) + c

    def values_at_vertices(self) -> dict:
        return {v.vertices[0]: self(v.vertices[0]) for v in self.domain.vertices}

    @property
    def is_integral(self) -> bool:
        """Integral slopes and integral values at the vertices of the complex."""
        for s, (slope, c) in self.pieces.items():
            if any(x.denominator != 1 for x in slope):
                return False
            if any((la.dot(slope, v) + c).denominator != 1 for v in s.vertices):
                return False
        return True

    @property
    def is_homogeneous(self) -> bool:
        return all(c == 0 for _, c in self.pieces.values())

    def is_well_defined(self) -> bool:
        """Adjacent pieces agree on every common face."""
        cells = self.domain.maximal_cells
        for i, s in enumerate(cells):
            for t in cells[i + 1:]:
                common = s.intersection(t)
                if common is None:
                    continue
                a, b = self.pieces[s], self.pieces[t]
                for v in common.vertices:
                    if la.dot(a[0], v) + a[1] != la.dot(b[0], v) + b[1]:
                        return False
                for r in common.rays + common.lines:
                    if la.dot(a[0], r) != la.dot(b[0], r):
                        return False
        return True

    def add_affine(self, slope: Sequence, const=0) -> "PLFunction":
        a = la.as_vector(slope)
        c = la.as_fraction(const)
        return PLFunction(self.domain, {s: (la.add(p, a), q + c)
                                        for s, (p, q) in self.pieces.items()})

    def scaled(self, k) -> "PLFunction":
        k = la.as_fraction(k)
        return PLFunction(self.domain, {s: (la.scale(k, p), k * q)
                                        for s, (p, q) in self.pieces.items()})

    def __neg__(self):
        return self.scaled(-1)

    # -- convexity ---------------------------------------------------------

    @cached_property
    def bends(self) -> list[Bend]:
        out = []
        for wall, s1, s2 in self.domain.interior_walls():
            nu = wall_normal(wall, s1)
            diff = la.sub(self.pieces[s1][0], self.pieces[s2][0])
            out.append(Bend(wall, (s1, s2), nu, _bend_value(diff, nu, s1)))
        return out

    def convexity_check(self) -> "ConvexityReport":
        return convexity_check(self)


def wall_normal(wall: Polyhedron, cell: Polyhedron) -> tuple[int, ...]:
    """Primitive integral normal to ``wall`` inside ``dir(cell)``, positive on ``cell``.

    The normal is a vector of the ambient space whose pairing with the
    saturated lattice of ``dir(cell)`` is primitive; it lies in ``dir(cell)``.
    """
    n = cell.dim
    basis = la.saturated_basis(cell.direction_space, n)
    wdirs = wall.direction_space
    wcoords = [la.coordinates(d, basis) for d in wdirs]
    k = len(basis)
    ann = la.integer_kernel(wcoords, k) if wcoords else [
        tuple(int(i == j) for j in range(k)) for i in range(k)]
    assert len(ann) == 1, "wall is not of codimension one"
    nu_coords = ann[0]
    probe = la.coordinates(la.sub(cell.relative_interior_point, wall.relative_interior_point), basis)
    if la.dot(nu_coords, probe) < 0:
        nu_coords = la.neg(nu_coords)
    # functional on dir(cell) with given values on the lattice basis
    gram = [[la.dot(b, c) for c in basis] for b in basis]
    coeffs = la.solve(gram, nu_coords)
    vec = tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(n))
    return tuple(vec)


def _bend_value(diff, nu, cell) -> Fraction:
    """The scalar ``c`` with ``diff = c * nu`` as functionals on ``dir(cell)``."""
    dirs = cell.direction_space
    for d in dirs:
        a = la.dot(nu, d)
        if a != 0:
            return Fraction(la.dot(diff, d)) / a
    return Fraction(0)


@dataclass
class ConvexityReport:
    convex: bool
    strictly_convex: bool
    violating_wall: Polyhedron | None = None
    flat_walls: tuple = ()

    def __bool__(self):
        return self.convex


def convexity_check(phi: PLFunction) -> ConvexityReport:
    """Local convexity across interior walls.

    For a convex support this is equivalent to global convexity; the bend
    across a wall is the jump of slopes measured against the primitive
    normal pointing into the first cell.
    """
    violating = None
    flat = []
    for b in phi.bends:
        if b.value < 0 and violating is None:
            violating = b.wall
        if b.value == 0:
            flat.append(b.wall)
    convex = violating is None
    return ConvexityReport(convex, convex and not flat, violating, tuple(flat))


# ---------------------------------------------------------------------------
# polytopes and fans


def _normal_cone(delta: Polyhedron, v) -> Cone:
    ineqs = [la.sub(v, w) for w in delta.vertices if w != v]
    return Cone.from_inequalities(ineqs, dim=delta.dim) if ineqs else Cone.whole_space(delta.dim)


def support_function(delta: Polyhedron) -> tuple[Fan, PLFunction]:
    """Normal fan of a bounded polyhedron and ``n -> max{<n,m> : m in delta}``."""
    if not delta.is_bounded:
        raise UnboundedInput("support function of an unbounded polyhedron")
    cones = {v: _normal_cone(delta, v) for v in delta.vertices}
    fan = Fan.from_cones(cones.values())
    pieces = {cone_cell(c): (v, 0) for v, c in cones.items()}
    return fan, PLFunction(fan, pieces)


def normal_fan(delta: Polyhedron) -> Fan:
    if not delta.is_bounded:
        raise UnboundedInput("normal fan of an unbounded polyhedron")
    if not delta.is_full_dimensional:
        raise NotFullDimensional("normal fan needs a full-dimensional polytope")
    return support_function(delta)[0]


def polytope_from_pl(fan: Fan, phi: PLFunction) -> Polyhedron:
    """``{m : <n,m> <= phi(n) for all n}`` for a convex PL function on a complete fan."""
    rep = convexity_check(phi)
    if not rep.convex:
        raise NotConvex("PL function is not convex", wall=rep.violating_wall)
    if not fan.is_complete:
        raise ValueError("polytope_from_pl needs a complete fan")
    ineqs, eqs = [], []
    for s, (slope, c) in phi.pieces.items():
        if c != 0:
            raise ValueError("PL function on a fan must be homogeneous")
        for r in s.rays:
            ineqs.append((la.neg(r), la.dot(slope, r)))
        for l in s.lines:
            eqs.append((l, -la.dot(slope, l)))
    return Polyhedron.from_hrep(ineqs, eqs, fan.ambient_dim)


def homogenize(domain: PolyhedralComplex, phi: PLFunction) -> tuple[Fan, PLFunction]:
    """The fan of cones over the cells and the degree-one extension ``r*phi(m/r)``."""
    rep = convexity_check(phi)
    if not rep.convex:
        raise NotConvex("cannot homogenize a non-convex function", wall=rep.violating_wall)
    pieces = {}
    for s, (slope, c) in phi.pieces.items():
        pieces[cone_cell(s.hom)] = (tuple(slope) + (c,), 0)
    fan = Fan(pieces.keys())
    return fan, PLFunction(fan, pieces)


def regular_subdivision_from_heights(points: Iterable[Sequence], heights: Iterable | None = None
                                     ) -> tuple[PolyhedralComplex, PLFunction]:
    """Lower-hull subdivision of ``conv(points)`` induced by lifting heights.

    Default heights are squared Euclidean norms, giving the Delaunay
    subdivision.
    """
    pts = [la.as_vector(p) for p in points]
    if not pts:
        raise DegenerateInput("no points")
    if len(set(pts)) != len(pts):
        raise DegenerateInput("coincident points")
    if heights is None:
        hs = [la.dot(p, p) for p in pts]
    else:
        hs = [la.as_fraction(h) for h in heights]
        if len(hs) != len(pts):
            raise ValueError("one height per point is required")
    d = len(pts[0])
    up = tuple([0] * d) + (1,)
    lifted = Polyhedron.from_vrep([p + (h,) for p, h in zip(pts, hs)], [up], dim=d + 1)
    cells, pieces = [], {}
    for a, b in lifted.inequalities:
        if a[-1] <= 0:
            continue
        on = [p for p, h in zip(pts, hs) if la.dot(a[:-1], p) + a[-1] * h + b == 0]
        cell = Polyhedron.from_vrep(on, dim=d)
        cells.append(cell)
        # height of the facet: h = -(a'.x + b) / a_last
        pieces[cell] = (tuple(Fraction(-x, a[-1]) for x in a[:-1]), Fraction(-b) / a[-1])
    if not cells:
        raise DegenerateInput("no lower facets")
    cx = PolyhedralComplex(cells)
    return cx, PLFunction(cx, pieces)



def pl_from_ray_values(fan: Fan, values: Mapping) -> PLFunction | None:
    """The homogeneous function on ``fan`` linear on cones with the given ray values.

    Returns None if the values are not linear on some (non-simplicial) cone.
    Cones must be pointed.
    """
    vals = {tuple(int(x) for x in k): la.as_fraction(v) for k, v in values.items()}
    n = fan.ambient_dim
    pieces = {}
    for s in fan.maximal_cells:
        rays = list(s.rays)
        rhs = [vals[r] for r in rays]
        slope = la.solve(rays, rhs) if rays else (Fraction(0),) * n
        if slope is None:
            return None
        pieces[s] = (slope, 0)
    return PLFunction(fan, pieces)
