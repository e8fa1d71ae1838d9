"""Exact rational cones and polyhedra.

Both representations are kept in a canonical form so that equality is a
structural comparison:

* lineality spaces and equation systems are stored as primitive RREF bases;
* extreme rays are primitive and orthogonal to the lineality space;
* facet normals are primitive and lie in the linear span of the cone.

A :class:`Polyhedron` is handled through its homogenization, the cone
``closure{(t x, t) : x in P, t >= 0}`` one dimension up.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la
from .errors import (
    EmptyPolyhedron,
    NotFullDimensional,
    UnboundedInput,
)

IntVec = tuple[int, ...]


# ---------------------------------------------------------------------------
# double description


def _double_description(ineqs: Sequence[Sequence], n: int):
    """Motzkin double description for ``{x : a.x >= 0 for a in ineqs}``.

    Returns ``(lines, rays)`` as integer vectors; rays are extreme modulo the
    lineality space.  Rows are inserted in lexicographic order so the output
    only depends on the set of inequalities.
    """
    rows = sorted({la.primitive(a) for a in ineqs if not la.is_zero(a)})
    lines: list[IntVec] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays: list[IntVec] = []
    done: list[IntVec] = []
    for a in rows:
        vals = [la.dot(a, l) for l in lines]
        k = next((i for i, v in enumerate(vals) if v != 0), None)
        if k is not None:
            l, al = lines[k], vals[k]
            if al < 0:
                l, al = la.neg(l), -al
            new_lines = []
            for i, li in enumerate(lines):
                if i == k:
                    continue
                w = la.sub(la.scale(al, li), la.scale(vals[i], l))
                new_lines.append(la.primitive(w))
            new_rays = []
            for r in rays:
                w = la.sub(la.scale(al, r), la.scale(la.dot(a, r), l))
                if not la.is_zero(w):
                    new_rays.append(la.primitive(w))
            new_rays.append(la.primitive(l))
            lines, rays = new_lines, new_rays
            done.append(a)
            continue
        done.append(a)
        pos, zero, negs = [], [], []
        for r in rays:
            v = la.dot(a, r)
            (pos if v > 0 else negs if v < 0 else zero).append((r, v))
        if not negs:
            continue
        target = n - len(lines) - 2
        prev = done[:-1]
        tight = {r: frozenset(i for i, c in enumerate(prev) if la.dot(c, r) == 0)
                 for r, _ in pos + negs}
        new = [r for r, _ in pos] + [r for r, _ in zero]
        for p, vp in pos:
            zp = tight[p]
            for q, vq in negs:
                common = zp & tight[q]
                if len(common) < target:
                    continue
                if la.rank([prev[i] for i in common]) != target:
                    continue
                w = la.sub(la.scale(vp, q), la.scale(vq, p))
                new.append(la.primitive(w))
        rays = new
    return lines, rays


# ---------------------------------------------------------------------------
# cones


class Cone:
    """A rational polyhedral cone ``span(lines) + cone(rays)`` in Q^dim.

    The H-representation is ``{x : e.x = 0 for e in equations,
    f.x >= 0 for f in facets}``.  Build instances with
    :meth:`from_generators` or :meth:`from_inequalities`.
    """

    def __init__(self, dim, lines, rays, equations, facets):
        self.dim = dim
        self.lines = la.canonical_basis(lines, dim)
        self.rays = tuple(sorted({la.primitive(la.project_out_integral(r, self.lines)) for r in rays}))
        self.equations = la.canonical_basis(equations, dim)
        self.facets = tuple(sorted({la.primitive(la.project_out_integral(f, self.equations))
                                    for f in facets}))

    @classmethod
    def from_generators(cls, rays: Iterable[Sequence], lines: Iterable[Sequence] = (),
                        dim: int | None = None) -> "Cone":
        rays = [la.clear_denominators(r) for r in rays]
        lines = [la.clear_denominators(l) for l in lines]
        dim = _infer_dim(dim, rays + lines)
        dual_ineqs = list(rays) + list(lines) + [la.neg(l) for l in lines]
        eqs, facets = _double_description(dual_ineqs, dim)
        lin = la.nullspace(list(facets) + list(eqs), dim)
        lin = la.canonical_basis(lin, dim)
        target = dim - len(lin) - 1
        extreme = []
        for r in rays:
            w = la.project_out_integral(r, lin)
            if la.is_zero(w):
                continue
            tight = [f for f in facets if la.dot(f, r) == 0]
            if la.rank(list(eqs) + tight) == target:
                extreme.append(w)
        return cls(dim, lin, extreme, eqs, facets)

    @classmethod
    def from_inequalities(cls, inequalities: Iterable[Sequence],
                          equations: Iterable[Sequence] = (),
                          dim: int | None = None) -> "Cone":
        ineqs = [la.clear_denominators(a) for a in inequalities]
        eqs = [la.clear_denominators(e) for e in equations]
        dim = _infer_dim(dim, ineqs + eqs)
        lines, rays = _double_description(ineqs + eqs + [la.neg(e) for e in eqs], dim)
        gens = list(lines) + list(rays)
        equations_ = la.nullspace(gens, dim) if gens else [
            tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        cdim = la.rank(gens)
        facets = []
        for a in ineqs:
            if all(la.dot(a, g) == 0 for g in gens):
                continue
            tight = [r for r in rays if la.dot(a, r) == 0]
            if la.rank(list(lines) + tight) == cdim - 1:
                facets.append(a)
        return cls(dim, lines, rays, equations_, facets)

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        return cls.from_generators([tuple(int(i == j) for j in range(n)) for i in range(n)])

    @classmethod
    def whole_space(cls, n: int) -> "Cone":
        return cls(n, [tuple(int(i == j) for j in range(n)) for i in range(n)], [], [], [])

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls(n, [], [], [tuple(int(i == j) for j in range(n)) for i in range(n)], [])

    # -- structure ---------------------------------------------------------

    @property
    def generators(self) -> tuple[IntVec, ...]:
        return self.rays

    @property
    def facet_normals(self) -> tuple[IntVec, ...]:
        return self.facets

    @property
    def dimension(self) -> int:
        return self.dim - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lines

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @cached_property
    def is_smooth(self) -> bool:
        gens = list(self.rays) + la.saturated_basis(self.lines, self.dim)
        if not gens:
            return True
        if la.rank(gens) != len(gens):
            return False
        return la.minors_gcd(gens) == 1

    @property
    def key(self):
        return (self.dim, self.lines, self.rays)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = [f"rays={list(self.rays)}"]
        if self.lines:
            parts.append(f"lines={list(self.lines)}")
        return f"Cone(dim={self.dim}, {', '.join(parts)})"

    def contains(self, x: Sequence) -> bool:
        x = la.clear_denominators(x)  # positive rescaling keeps membership
        return (all(la.dot(e, x) == 0 for e in self.equations)
                and all(la.dot(f, x) >= 0 for f in self.facets))

    def contains_in_relative_interior(self, x: Sequence) -> bool:
        x = la.clear_denominators(x)
        return (all(la.dot(e, x) == 0 for e in self.equations)
                and all(la.dot(f, x) > 0 for f in self.facets))

    def linear_span(self) -> list[IntVec]:
        return la.canonical_basis(list(self.lines) + list(self.rays), self.dim)

    def dual(self) -> "Cone":
        """``{y : y.x >= 0 for all x in self}``; an exact involution."""
        return Cone(self.dim, self.equations, self.facets, self.lines, self.rays)

    def negate(self) -> "Cone":
        return Cone(self.dim, self.lines, [la.neg(r) for r in self.rays],
                    self.equations, [la.neg(f) for f in self.facets])

    def interior_vector(self) -> tuple[Fraction, ...]:
        """Sum of the extreme rays: a point in the relative interior."""
        v = tuple(Fraction(0) for _ in range(self.dim))
        for r in self.rays:
            v = la.add(v, r)
        return v

    def faces(self) -> list["Cone"]:
        """All nonempty faces, ordered by dimension then canonical key."""
        sets = _face_ray_sets(self.rays, self.facets)
        out = {self._face(s) for s in sets}
        return sorted(out, key=lambda c: (c.dimension, c.key))

    def _face(self, subset) -> "Cone":
        """The face spanned by the rays indexed by ``subset``, without a new DD run."""
        rays = [self.rays[i] for i in sorted(subset)]
        tight, loose = [], []
        for f in self.facets:
            (tight if all(la.dot(f, r) == 0 for r in rays) else loose).append(f)
        fdim = la.rank(list(self.lines) + rays) if (rays or self.lines) else 0
        facets = []
        for f in loose:
            zero = [r for r in rays if la.dot(f, r) == 0]
            if la.rank(list(self.lines) + zero) == fdim - 1:
                facets.append(f)
        return Cone(self.dim, self.lines, rays, list(self.equations) + tight, facets)

    def intersection(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(self.facets + other.facets,
                                      self.equations + other.equations, self.dim)

    def is_face_of(self, other: "Cone") -> bool:
        return self in other.faces()

    def linear_image(self, matrix: Sequence[Sequence]) -> "Cone":
        rays = [la.matvec(matrix, r) for r in self.rays]
        lines = [la.matvec(matrix, l) for l in self.lines]
        return Cone.from_generators([r for r in rays if not la.is_zero(r)],
                                    [l for l in lines if not la.is_zero(l)], len(matrix))


def _infer_dim(dim, vectors):
    if dim is not None:
        return dim
    if not vectors:
        raise ValueError("ambient dimension cannot be inferred from empty input")
    return len(vectors[0])


def _face_ray_sets(rays, facets) -> set[frozenset]:
    full = frozenset(range(len(rays)))
    by_facet = [frozenset(i for i, r in enumerate(rays) if la.dot(f, r) == 0) for f in facets]
    faces = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for s in frontier:
            for t in by_facet:
                u = s & t
                if u not in faces:
                    faces.add(u)
                    nxt.append(u)
        frontier = nxt
    return faces


def dual_cone(cone: Cone, negate: bool = False) -> Cone:
    d = cone.dual()
    return d.negate() if negate else d


# ---------------------------------------------------------------------------
# polyhedra


class Polyhedron:
    """A rational polyhedron ``conv(vertices) + cone(rays) + span(lines)``.

    Inequalities are pairs ``(normal, offset)`` meaning
    ``normal.x + offset >= 0``; equations likewise with ``= 0``.
    """

    def __init__(self, homogenization: Cone):
        self.hom = homogenization
        self.dim = homogenization.dim - 1
        verts, rays = [], []
        for r in homogenization.rays:
            if r[-1] > 0:
                h = r[-1]
                verts.append(tuple(x // h if x % h == 0 else Fraction(x, h) for x in r[:-1]))
            else:
                rays.append(r[:-1])
        if not verts:
            raise EmptyPolyhedron("polyhedron is empty")
        self.vertices = tuple(sorted(verts))
        self.rays = tuple(sorted(rays))
        self.lines = tuple(l[:-1] for l in homogenization.lines)

    @classmethod
    def from_vrep(cls, vertices: Iterable[Sequence], rays: Iterable[Sequence] = (),
                  lines: Iterable[Sequence] = (), dim: int | None = None) -> "Polyhedron":
        vertices = [la.as_vector(v) for v in vertices]
        rays = [la.clear_denominators(r) for r in rays]
        lines = [la.clear_denominators(l) for l in lines]
        if not vertices:
            raise EmptyPolyhedron("a V-representation needs at least one point")
        dim = _infer_dim(dim, vertices)
        gens = [v + (Fraction(1),) for v in vertices] + [r + (Fraction(0),) for r in rays]
        hl = [l + (Fraction(0),) for l in lines]
        return cls(Cone.from_generators(gens, hl, dim + 1))

    @classmethod
    def from_hrep(cls, inequalities: Iterable[tuple[Sequence, object]],
                  equations: Iterable[tuple[Sequence, object]] = (),
                  dim: int | None = None) -> "Polyhedron":
        ineqs = [la.as_vector(a) + (la.as_fraction(b),) for a, b in inequalities]
        eqs = [la.as_vector(a) + (la.as_fraction(b),) for a, b in equations]
        if dim is None:
            dim = _infer_dim(None, ineqs + eqs) - 1
        height = tuple([0] * dim) + (1,)
        return cls(Cone.from_inequalities(ineqs + [height], eqs, dim + 1))

    @classmethod
    def point(cls, p: Sequence) -> "Polyhedron":
        return cls.from_vrep([p])

    @classmethod
    def whole_space(cls, n: int) -> "Polyhedron":
        return cls.from_vrep([tuple([0] * n)], lines=[tuple(int(i == j) for j in range(n))
                                                      for i in range(n)])

    # -- structure ---------------------------------------------------------

    @property
    def key(self):
        return (self.dim, self.lines, self.vertices, self.rays)

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return (self.dimension, self.key) < (other.dimension, other.key)

    def __repr__(self):
        parts = [f"vertices={[_fmt(v) for v in self.vertices]}"]
        if self.rays:
            parts.append(f"rays={list(self.rays)}")
        if self.lines:
            parts.append(f"lines={list(self.lines)}")
        return f"Polyhedron({', '.join(parts)})"

    @property
    def dimension(self) -> int:
        return self.hom.dimension - 1

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    @property
    def is_full_dimensional(self) -> bool:
        return self.dimension == self.dim

    @cached_property
    def equations(self) -> tuple[tuple[IntVec, int], ...]:
        return tuple((e[:-1], e[-1]) for e in self.hom.equations)

    @cached_property
    def direction_space(self) -> list:
        """Basis of the linear space parallel to the affine hull."""
        vs = self.vertices
        vecs = [la.sub(v, vs[0]) for v in vs[1:]] + list(self.rays) + list(self.lines)
        return la.canonical_basis(vecs, self.dim)

    @cached_property
    def inequalities(self) -> tuple[tuple[IntVec, Fraction], ...]:
        """Facet inequalities with primitive normals parallel to the affine hull."""
        eq_normals = [a for a, _ in self.equations]
        out = set()
        for f in self.hom.facets:
            a, b = f[:-1], f[-1]
            tight = [v for v in self.vertices if la.dot(a, v) + b == 0]
            if not tight:
                continue  # face at infinity of the homogenization
            a2 = la.project_out(a, eq_normals)
            if la.is_zero(a2):
                continue
            n = la.primitive(a2)
            out.add((n, -la.dot(n, tight[0])))
        return tuple(sorted(out))

    @property
    def facet_inequalities(self):
        return self.inequalities

    def contains(self, x: Sequence) -> bool:
        return self.hom.contains(tuple(x) + (1,))

    def contains_in_relative_interior(self, x: Sequence) -> bool:
        x = la.clear_denominators(tuple(x) + (1,))
        return (all(la.dot(e, x) == 0 for e in self.hom.equations)
                and all(la.dot(a + (b,), x) > 0 for a, b in self.inequalities))

    @cached_property
    def barycenter(self) -> tuple[Fraction, ...]:
        """Average of the vertices."""
        k = len(self.vertices)
        s = self.vertices[0]
        for v in self.vertices[1:]:
            s = la.add(s, v)
        return tuple(Fraction(x) / k for x in s)

    @cached_property
    def relative_interior_point(self) -> tuple[Fraction, ...]:
        p = self.barycenter
        for r in self.rays:
            p = la.add(p, r)
        return p

    def recession_cone(self) -> Cone:
        return Cone.from_generators(self.rays, self.lines, self.dim)

    @cached_property
    def _faces(self) -> tuple["Polyhedron", ...]:
        hr = self.hom.rays
        out = set()
        for s in _face_ray_sets(hr, self.hom.facets):
            sub = [hr[i] for i in s]
            if not any(r[-1] > 0 for r in sub):
                continue
            out.add(Polyhedron(self.hom._face(s)))
        return tuple(sorted(out))

    @cached_property
    def _face_set(self) -> frozenset:
        return frozenset(self._faces)

    def faces(self, dimension: int | None = None) -> list["Polyhedron"]:
        """Nonempty faces (including ``self``) by increasing dimension."""
        fs = list(self._faces)
        if dimension is not None:
            fs = [f for f in fs if f.dimension == dimension]
        return fs

    def facets(self) -> list["Polyhedron"]:
        return self.faces(self.dimension - 1)

    def is_face_of(self, other: "Polyhedron") -> bool:
        if self.dimension > other.dimension or not all(other.contains(v) for v in self.vertices):
            return False
        return self in other._face_set

    def is_disjoint_from(self, other: "Polyhedron") -> bool:
        """Cheap sufficient test: some facet of one strictly separates the other."""
        for a, b in (self, other), (other, self):
            for n, c in a.inequalities:
                if (all(la.dot(n, v) + c < 0 for v in b.vertices)
                        and all(la.dot(n, r) <= 0 for r in b.rays)
                        and all(la.dot(n, l) == 0 for l in b.lines)):
                    return True
            for e, c in a.equations:
                vals = [la.dot(e, v) + c for v in b.vertices]
                if (all(x > 0 for x in vals) or all(x < 0 for x in vals)) and \
                        all(la.dot(e, r) == 0 for r in (*b.rays, *b.lines)):
                    return True
        return False

    def issubset(self, other: "Polyhedron") -> bool:
        return (all(other.contains(v) for v in self.vertices)
                and all(other.recession_cone().contains(r) for r in self.rays)
                and all(other.recession_cone().contains(l)
                        and other.recession_cone().contains(la.neg(l)) for l in self.lines))

    def intersection(self, other: "Polyhedron") -> "Polyhedron | None":
        try:
            return Polyhedron.from_hrep(self.inequalities + other.inequalities,
                                        self.equations + other.equations, self.dim)
        except EmptyPolyhedron:
            return None

    def translate(self, t: Sequence) -> "Polyhedron":
        return Polyhedron.from_vrep([la.add(v, t) for v in self.vertices], self.rays,
                                    self.lines, self.dim)

    def negate(self) -> "Polyhedron":
        return Polyhedron.from_vrep([la.neg(v) for v in self.vertices],
                                    [la.neg(r) for r in self.rays], self.lines, self.dim)

    def scaled(self, c) -> "Polyhedron":
        c = la.as_fraction(c)
        return Polyhedron.from_vrep([la.scale(c, v) for v in self.vertices], self.rays,
                                    self.lines, self.dim)

    def affine_image(self, matrix: Sequence[Sequence], translation: Sequence) -> "Polyhedron":
        verts = [la.add(la.matvec(matrix, v), translation) for v in self.vertices]
        rays = [la.matvec(matrix, r) for r in self.rays]
        lines = [la.matvec(matrix, l) for l in self.lines]
        return Polyhedron.from_vrep(verts, [r for r in rays if not la.is_zero(r)],
                                    [l for l in lines if not la.is_zero(l)], len(matrix))

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def lattice_points(self) -> list[IntVec]:
        if not self.is_bounded:
            raise UnboundedInput("lattice points of an unbounded polyhedron")
        return [p for p in _box_points(self.vertices) if self.contains(p)]

    def interior_lattice_points(self) -> list[IntVec]:
        return interior_lattice_points(self)


def _fmt(v):
    return tuple(int(x) if x.denominator == 1 else str(x) for x in v)


def _box_points(vertices):
    import math
    lo = [math.ceil(min(v[i] for v in vertices)) for i in range(len(vertices[0]))]
    hi = [math.floor(max(v[i] for v in vertices)) for i in range(len(vertices[0]))]
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


# ---------------------------------------------------------------------------
# operations


def convert_representation(rep: dict):
    """Convert between V- and H-representations.

    ``rep`` is one of::

        {"kind": "cone", "rays": ..., "lines": ...}
        {"kind": "cone", "inequalities": ..., "equations": ...}
        {"kind": "polyhedron", "vertices": ..., "rays": ..., "lines": ...}
        {"kind": "polyhedron", "inequalities": [(a, b), ...], "equations": ...}

    and the result is the minimal form of the other representation.
    """
    kind = rep.get("kind", "polyhedron")
    dim = rep.get("dim")
    if kind == "cone":
        if "rays" in rep or "lines" in rep:
            c = Cone.from_generators(rep.get("rays", ()), rep.get("lines", ()), dim)
            return {"kind": "cone", "inequalities": list(c.facets), "equations": list(c.equations)}
        c = Cone.from_inequalities(rep.get("inequalities", ()), rep.get("equations", ()), dim)
        return {"kind": "cone", "rays": list(c.rays), "lines": list(c.lines)}
    if "vertices" in rep:
        p = Polyhedron.from_vrep(rep["vertices"], rep.get("rays", ()), rep.get("lines", ()), dim)
        return {"kind": "polyhedron", "inequalities": list(p.inequalities),
                "equations": list(p.equations)}
    p = Polyhedron.from_hrep(rep.get("inequalities", ()), rep.get("equations", ()), dim)
    return {"kind": "polyhedron", "vertices": list(p.vertices), "rays": list(p.rays),
            "lines": list(p.lines)}


def cone_over_polytope(delta: Polyhedron, negate: bool = False) -> Cone:
    """``closure{(t m, t) : m in ±delta, t >= 0}``."""
    if not delta.is_bounded:
        raise UnboundedInput("cone_over_polytope needs a bounded polyhedron")
    sign = -1 if negate else 1
    return Cone.from_generators([la.scale(sign, v) + (Fraction(1),) for v in delta.vertices],
                                dim=delta.dim + 1)


def homogenization(p: Polyhedron) -> Cone:
    """The closed cone over ``p`` (vertices at height 1, rays at height 0)."""
    return p.hom


def recession_cone(p: Polyhedron) -> Cone:
    return p.recession_cone()


class FacePoset:
    """Faces of a polyhedron with their inclusion order."""

    def __init__(self, polyhedron: Polyhedron):
        self.polyhedron = polyhedron
        self.faces = polyhedron.faces()
        self._index = {f: i for i, f in enumerate(self.faces)}

    def __len__(self):
        return len(self.faces)

    def of_dimension(self, d: int) -> list[Polyhedron]:
        return [f for f in self.faces if f.dimension == d]

    def leq(self, f: Polyhedron, g: Polyhedron) -> bool:
        return f.issubset(g)

    def meet(self, f: Polyhedron, g: Polyhedron) -> Polyhedron | None:
        return f.intersection(g)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for f in self.faces:
            out[f.dimension] = out.get(f.dimension, 0) + 1
        return out


def face_data(p: Polyhedron) -> tuple[FacePoset, Cone]:
    return FacePoset(p), p.recession_cone()


def interior_lattice_points(delta: Polyhedron) -> list[IntVec]:
    """Lattice points strictly inside a full-dimensional polytope, lexicographically."""
    if not delta.is_bounded:
        raise UnboundedInput("interior lattice points of an unbounded polyhedron")
    if not delta.is_full_dimensional:
        raise NotFullDimensional("interior lattice points need a full-dimensional polytope")
    ineqs = delta.inequalities
    return [p for p in _box_points(delta.vertices)
            if all(la.dot(a, p) + b > 0 for a, b in ineqs)]


def cone_properties(cone: Cone) -> dict:
    """Pointedness, full-dimensionality, smoothness and Gorenstein height.

    ``gorenstein_height`` is an integral ``h`` with ``h.g = 1`` on every
    generator, or ``None`` when the generators do not lie on such a
    lattice hyperplane.
    """
    h = None
    if cone.is_pointed and cone.rays:
        h = la.integer_solve(cone.rays, [1] * len(cone.rays), cone.dim)
    return {
        "pointed": cone.is_pointed,
        "full_dimensional": cone.is_full_dimensional,
        "smooth": cone.is_smooth,
        "gorenstein_height": h,
    }


def primitive(v: Sequence) -> IntVec:
    return la.primitive(v)
