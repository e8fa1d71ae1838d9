"""Tropical manifolds embedded in Q^n, the discrete Legendre transform and
barycentric subdivision.

A tropical manifold is a triple ``(B, P, phi)``: a convex polyhedron ``B``,
a lattice polyhedral decomposition ``P`` of ``B`` and a strictly convex
piecewise-affine ``phi`` whose domains of linearity are the maximal cells.

The transform is the discrete convex conjugate.  The dual of a cell ``tau``
is the subdifferential of ``phi`` at a relative interior point of ``tau``;
on the dual of a vertex ``v`` the conjugate is ``n -> <n, v> - phi(v)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .complexes import PolyhedralComplex
from .errors import InvalidManifold, NoIsomorphism, PreconditionFailed
from .plfunctions import PLFunction, canonical_piece, convexity_check
from .polyhedra import Polyhedron


@dataclass
class ValidationReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def __bool__(self):
        return self.valid

    def fail(self, check: str, message: str, *cells):
        self.checks[check] = False
        self.failures.append((check, message, cells))

    def summary(self) -> str:
        if self.valid:
            return "valid"
        return "; ".join(f"{c}: {m}" for c, m, _ in self.failures)


CHECKS = ("faces", "intersections", "covering", "lattice", "well_defined", "convex",
          "strictly_convex")


def validate(B: Polyhedron, P: PolyhedralComplex, phi: PLFunction | None) -> ValidationReport:
    rep = ValidationReport({c: True for c in CHECKS})
    cells = set(P.cells)
    # faces of faces are faces, so the maximal cells suffice
    for c in P.maximal_cells:
        for f in c.faces():
            if f not in cells:
                rep.fail("faces", "missing face", c, f)
                break
    maxc = P.maximal_cells
    for i, s in enumerate(maxc):
        for t in maxc[i + 1:]:
            if s.is_disjoint_from(t):
                continue
            common = s.intersection(t)
            if common is None:
                continue
            if not (common.is_face_of(s) and common.is_face_of(t)):
                rep.fail("intersections", "cells do not meet in a common face", s, t)
            elif common not in cells:
                rep.fail("intersections", "intersection is not a cell", s, t)
    d = B.dimension
    if any(s.dimension != d for s in maxc):
        bad = next(s for s in maxc if s.dimension != d)
        rep.fail("covering", "maximal cell of wrong dimension", bad)
    elif not all(s.issubset(B) for s in maxc):
        rep.fail("covering", "cell outside B", next(s for s in maxc if not s.issubset(B)))
    elif P.support_hull != B:
        rep.fail("covering", "cells do not span B")
    else:
        for w in P.cells_of_dimension(d - 1):
            st = P.maximal_star(w)
            inner = B.contains_in_relative_interior(w.relative_interior_point)
            if len(st) != (2 if inner else 1):
                rep.fail("covering", "wall not matched", w, *st)
    for c in P.cells:
        if not c.is_lattice:
            rep.fail("lattice", "non-integral vertex", c)
            break
    if phi is None:
        rep.checks["convex"] = rep.checks["strictly_convex"] = False
        rep.failures.append(("convex", "no polarization", ()))
        return rep
    if rep.checks["covering"] and rep.checks["faces"]:
        if not phi.is_well_defined():
            rep.fail("well_defined", "pieces disagree on a common face")
        conv = convexity_check(phi)
        if not conv.convex:
            rep.fail("convex", "negative bend", conv.violating_wall)
        if not conv.strictly_convex:
            rep.fail("strictly_convex", "zero bend", *conv.flat_walls)
    return rep


class TropicalManifold:
    """An embedded tropical manifold ``(B, P, phi)``."""

    def __init__(self, P: PolyhedralComplex, phi: PLFunction, B: Polyhedron | None = None,
                 check: bool = True):
        self.P = P
        self.phi = phi
        self.B = P.support_hull if B is None else B
        self.dual_map: dict | None = None
        self._report: ValidationReport | None = None
        if check:
            rep = self.validate()
            if not rep.valid:
                raise InvalidManifold(rep.summary(), report=rep)

    @classmethod
    def from_cells(cls, maximal_cells, phi=None, B=None, check=True) -> "TropicalManifold":
        """``phi`` may be a PLFunction, a callable, or None for the zero function."""
        P = PolyhedralComplex(maximal_cells)
        if phi is None:
            f = PLFunction.zero(P)
        elif isinstance(phi, PLFunction):
            f = phi
        else:
            f = PLFunction.from_function(P, phi)
        return cls(P, f, B, check)

    def __repr__(self):
        return f"TropicalManifold(B={self.B!r}, {len(self.P.maximal_cells)} maximal cells)"

    def __eq__(self, other):
        return (isinstance(other, TropicalManifold) and self.B == other.B
                and self.P == other.P and self.phi == other.phi)

    def __hash__(self):
        return hash((self.B, self.P))

    @property
    def dim(self) -> int:
        return self.P.ambient_dim

    def validate(self) -> ValidationReport:
        if self._report is None:
            self._report = validate(self.B, self.P, self.phi)
        return self._report

    def dual_cell(self, tau: Polyhedron) -> Polyhedron:
        return dual_cell(self, tau)

    def translate(self, t) -> "TropicalManifold":
        t = la.as_vector(t)
        P2 = self.P.translate(t)
        pieces = {}
        for s, (slope, c) in self.phi.pieces.items():
            pieces[s.translate(t)] = (slope, c - la.dot(slope, t))
        return TropicalManifold(P2, PLFunction(P2, pieces), self.B.translate(t), check=False)

    def add_affine(self, slope, const=0) -> "TropicalManifold":
        return TropicalManifold(self.P, self.phi.add_affine(slope, const), self.B, check=False)


def dual_cell(T: TropicalManifold, tau: Polyhedron) -> Polyhedron:
    """Subdifferential of ``phi`` (restricted to ``B``) at a relative interior point of ``tau``."""
    T.P.index(tau)
    y = tau.relative_interior_point
    ineqs, eqs = [], []
    for s in T.P.maximal_star(tau):
        slope, _ = T.phi.pieces[s]
        # <n - slope, w - y> <= 0 for w in s
        for w in s.vertices:
            d = la.sub(y, w)
            if not la.is_zero(d):
                ineqs.append((d, -la.dot(slope, d)))
        for r in s.rays:
            ineqs.append((la.neg(r), la.dot(slope, r)))
        for l in s.lines:
            eqs.append((l, -la.dot(slope, l)))
    n = T.dim
    if not ineqs and not eqs:
        return Polyhedron.whole_space(n)
    try:
        return Polyhedron.from_hrep(ineqs, eqs, n)
    except Exception as exc:  # an empty subdifferential means phi is not convex
        raise InvalidManifold(f"empty dual cell for {tau!r}") from exc


def dlt(T: TropicalManifold, negate: bool = False, check: bool = True) -> TropicalManifold:
    """Discrete Legendre transform.

    The returned manifold carries ``dual_map`` (cell -> dual cell).  With
    ``negate`` every dual cell is reflected through the origin and the
    conjugate composed with ``n -> -n``.
    """
    if check:
        rep = T.validate()
        if not rep.valid:
            raise InvalidManifold(rep.summary(), report=rep)
    sign = -1 if negate else 1
    dual = {}
    for tau in T.P.cells:
        c = dual_cell(T, tau)
        dual[tau] = c.negate() if negate else c
    # a cell without proper faces is an affine subspace
    minimal = [tau for tau in T.P.cells if len(tau.vertices) == 1 and not tau.rays]
    P2 = PolyhedralComplex(dual[tau] for tau in minimal)
    pieces = {}
    for tau in minimal:
        y = tau.relative_interior_point
        pieces[dual[tau]] = (la.scale(sign, y), -T.phi(y))
    phi2 = PLFunction(P2, pieces)
    out = TropicalManifold(P2, phi2, check=False)
    out.dual_map = dual
    if check:
        rep = out.validate()
        if not rep.valid:
            raise InvalidManifold("transform failed validation: " + rep.summary(), report=rep)
    return out


# ---------------------------------------------------------------------------
# integral affine isomorphisms


@dataclass(frozen=True)
class IntegralAffineIso:
    """``x -> matrix x + translation`` with ``matrix`` in GL_n(Z)."""

    matrix: tuple
    translation: tuple

    @classmethod
    def identity(cls, n: int) -> "IntegralAffineIso":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)

    def __post_init__(self):
        d = la.det(self.matrix)
        if abs(d) != 1 or any(Fraction(x).denominator != 1 for r in self.matrix for x in r):
            raise ValueError("matrix is not in GL_n(Z)")

    def __call__(self, x):
        return la.add(la.matvec(self.matrix, x), self.translation)

    def linear(self, v):
        return la.matvec(self.matrix, v)

    def polyhedron(self, p: Polyhedron) -> Polyhedron:
        return p.affine_image(self.matrix, self.translation)

    @property
    def is_identity(self) -> bool:
        n = len(self.matrix)
        return self == IntegralAffineIso.identity(n)


def _pl_difference_affine(T1, T2, A: IntegralAffineIso, cellmap) -> bool:
    """Whether ``phi2 o A - phi1`` is a single affine function on ``B1``."""
    ref = None
    for s1, s2 in cellmap.items():
        a1, c1 = T1.phi.pieces[s1]
        a2, c2 = T2.phi.pieces[s2]
        # phi2(Ax + t) = a2.(Ax) + a2.t + c2 ; pull back slope by A^T
        pulled = la.matvec(la.transpose(A.matrix), a2)
        slope = la.sub(pulled, a1)
        const = la.dot(a2, A.translation) + c2 - c1
        # compare as affine functions on aff(s1)
        piece = canonical_piece(s1, slope, const)
        if ref is None:
            ref = (slope, const)
        elif canonical_piece(s1, *ref) != piece:
            return False
    return True


def _match(T1, T2, A) -> dict | None:
    target = set(T2.P.maximal_cells)
    cellmap = {}
    for s in T1.P.maximal_cells:
        img = A.polyhedron(s)
        if img not in target:
            return None
        cellmap[s] = img
    if len(set(cellmap.values())) != len(target):
        return None
    return cellmap


def involution_witness(T1: TropicalManifold, T2: TropicalManifold) -> IntegralAffineIso:
    """An integral affine isomorphism carrying ``T1`` to ``T2``.

    Matching is on cells; the polarizations need only agree up to an affine
    function.  The search maps an affine frame of one maximal cell of ``T1``
    (a vertex plus edge directions) onto every candidate frame of ``T2``.
    """
    n = T1.dim
    if T2.dim != n or len(T1.P.cells) != len(T2.P.cells):
        raise NoIsomorphism("complexes have different sizes")
    ident = IntegralAffineIso.identity(n)
    cm = _match(T1, T2, ident)
    if cm is not None and _pl_difference_affine(T1, T2, ident, cm):
        return ident
    s1 = T1.P.maximal_cells[0]
    if s1.lines or s1.dimension != n:
        raise NoIsomorphism("witness search needs full-dimensional pointed cells")
    frame1 = _frames(s1, first_only=True)
    if not frame1:
        raise NoIsomorphism("no affine frame")
    v0, dirs1 = frame1[0]
    M1 = la.transpose(dirs1)
    for s2 in T2.P.maximal_cells:
        if (len(s2.vertices), len(s2.rays)) != (len(s1.vertices), len(s1.rays)):
            continue
        for w0, dirs2 in _frames(s2):
            # A dirs1 = dirs2
            M2 = la.transpose(dirs2)
            inv = _inverse(M1)
            A = _matmul(M2, inv)
            if any(x.denominator != 1 for r in A for x in r) or abs(la.det(A)) != 1:
                continue
            t = la.sub(w0, la.matvec(A, v0))
            if any(x.denominator != 1 for x in t):
                continue
            iso = IntegralAffineIso(tuple(tuple(int(x) for x in r) for r in A),
                                    tuple(int(x) for x in t))
            cm = _match(T1, T2, iso)
            if cm is not None and _pl_difference_affine(T1, T2, iso, cm):
                return iso
    raise NoIsomorphism("no integral affine isomorphism found")


def _frames(cell: Polyhedron, first_only=False):
    """(base vertex, edge-direction basis) pairs; edges are bounded or rays."""
    out = []
    n = cell.dim
    for v in cell.vertices:
        edges = []
        for e in cell.faces(1):
            if v in e.vertices:
                if e.is_bounded:
                    other = e.vertices[0] if e.vertices[1] == v else e.vertices[1]
                    edges.append(la.sub(other, v))
                else:
                    edges.append(la.as_vector(e.rays[0]))
        for combo in itertools.permutations(edges, n):
            if la.rank(list(combo)) == n:
                out.append((v, list(combo)))
                if first_only:
                    return out
    return out


def _inverse(m):
    n = len(m)
    cols = []
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        cols.append(la.solve(m, e))
    return la.transpose(cols)


def _matmul(a, b):
    bt = la.transpose(b)
    return [tuple(la.dot(r, c) for c in bt) for r in a]


# ---------------------------------------------------------------------------
# barycentric subdivision


def rho(cell: Polyhedron) -> tuple:
    """Sum of the primitive generators of the recession cone of ``cell``."""
    v = (Fraction(0),) * cell.dim
    for r in cell.rays:
        v = la.add(v, r)
    return v


def barycentric(B: Polyhedron, P: PolyhedralComplex) -> PolyhedralComplex:
    """Barycentric subdivision, extended to unbounded cells by rho-cones.

    Each chain ``t0 < t1 < ... < tk`` of cells gives the cell
    ``conv(bar t0, ..., bar tk) + sum_{i >= 1, ti unbounded} R>=0 rho(ti)``
    where ``bar t`` is the average of the vertices of ``t``.
    """
    for c in P.cells:
        if c.lines:
            raise PreconditionFailed("cells with lineality have no barycentre", cell=c)
        if not c.is_bounded:
            core = Polyhedron.from_vrep(c.vertices, dim=c.dim)
            if not core.is_face_of(c):
                raise PreconditionFailed("convex hull of the vertices is not a face", cell=c)
    up = {c: [d for d in P.cells if d.dimension == c.dimension + 1 and c.is_face_of(d)]
          for c in P.cells}
    out = set()

    def extend(chain):
        last = chain[-1]
        if not up[last]:
            pts = [c.barycenter for c in chain]
            rays = [rho(c) for c in chain[1:] if not c.is_bounded]
            out.add(Polyhedron.from_vrep(pts, rays, dim=B.dim))
            return
        for d in up[last]:
            extend(chain + [d])

    for v in P.cells_of_dimension(0):
        extend([v])
    return PolyhedralComplex(out)
