"""Hilbert bases of pointed rational cones.

The cone is triangulated by a placing triangulation of its extreme rays;
the lattice points of every half-open fundamental parallelepiped together
with the rays form a finite generating set, which is then reduced to its
irreducible elements.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
import itertools
from typing import Sequence

from . import linalg as la
from .errors import NotPointed
from .polyhedra import Cone

IntVec = tuple[int, ...]


def placing_triangulation(rays: Sequence[IntVec]) -> list[tuple[int, ...]]:
    """Triangulate ``cone(rays)`` into simplicial cones on the given rays.

    ``rays`` must be the extreme rays of a pointed cone whose span is all of
    Q^k (k = len(rays[0])).  Returns index tuples of k rays each.
    """
    k = len(rays[0])
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    start: list[int] = []
    for i in order:
        if la.rank([rays[j] for j in start + [i]]) == len(start) + 1:
            start.append(i)
        if len(start) == k:
            break
    simplices = [tuple(sorted(start))]
    for i in order:
        if i in start:
            continue
        r = rays[i]
        faces: dict[tuple[int, ...], list] = {}
        for s in simplices:
            for j in s:
                f = tuple(x for x in s if x != j)
                faces.setdefault(f, []).append(j)
        added = []
        for f, opp in faces.items():
            if len(opp) != 1:
                continue
            nu = _facet_normal([rays[x] for x in f], rays[opp[0]], k)
            if la.dot(nu, r) < 0:
                added.append(tuple(sorted(f + (i,))))
        simplices.extend(added)
    return simplices


def _facet_normal(face, apex, k):
    if k == 1:
        return (1,) if apex[0] > 0 else (-1,)
    nu = la.nullspace(face, k)[0]
    if la.dot(nu, apex) < 0:
        nu = la.neg(nu)
    return nu


def parallelepiped_points(gens: Sequence[IntVec]) -> list[IntVec]:
    """Lattice points ``sum l_i g_i`` with ``0 <= l_i < 1`` for a basis ``gens`` of Q^k.

    These form a group under addition modulo the sublattice spanned by the
    generators; it is generated by the fractional coordinates of the unit
    vectors.
    """
    k = len(gens)
    gt = la.transpose(gens)
    units = []
    for j in range(k):
        e = tuple(int(i == j) for i in range(k))
        lam = la.solve(gt, e)
        units.append(tuple(x - (x.numerator // x.denominator) for x in lam))
    zero = tuple(Fraction(0) for _ in range(k))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for u in units:
                q = tuple((a + b) - ((a + b).numerator // (a + b).denominator) for a, b in zip(p, u))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    out = []
    for lam in seen:
        v = tuple(sum(l * g[c] for l, g in zip(lam, gens)) for c in range(k))
        out.append(tuple(int(x) for x in v))
    return sorted(out)


class AffineMonoid:
    """The monoid ``C ∩ Z^n`` of a pointed cone with its Hilbert basis."""

    def __init__(self, cone: Cone, hilbert_basis: Sequence[IntVec]):
        self.cone = cone
        self.hilbert_basis = tuple(sorted(hilbert_basis))
        self.ambient_rank = cone.dim

    def __repr__(self):
        return f"AffineMonoid(hilbert_basis={list(self.hilbert_basis)})"

    def __eq__(self, other):
        return isinstance(other, AffineMonoid) and (self.cone, self.hilbert_basis) == (
            other.cone, other.hilbert_basis)

    def __hash__(self):
        return hash((self.cone, self.hilbert_basis))

    def __len__(self):
        return len(self.hilbert_basis)

    def __iter__(self):
        return iter(self.hilbert_basis)

    @cached_property
    def grading(self) -> IntVec:
        """An integral functional positive on every nonzero monoid element."""
        h = tuple([0] * self.cone.dim)
        for f in self.cone.facets:
            h = la.add(h, f)
        return h

    @property
    def rank(self) -> int:
        return la.rank(self.hilbert_basis) if self.hilbert_basis else 0

    @property
    def is_free(self) -> bool:
        return len(self.hilbert_basis) == self.rank

    def contains(self, x: Sequence) -> bool:
        return all(la.as_fraction(c).denominator == 1 for c in x) and self.cone.contains(x)

    def index(self, x: Sequence) -> int:
        return self.hilbert_basis.index(tuple(int(c) for c in x))

    def decompose(self, x: Sequence) -> tuple[int, ...] | None:
        """Nonnegative integer coefficients expressing ``x`` in the Hilbert basis."""
        x = tuple(int(c) for c in x)
        if not self.contains(x):
            return None
        basis = self.hilbert_basis
        h = self.grading

        @lru_cache(maxsize=None)
        def rec(y, start):
            if all(c == 0 for c in y):
                return ()
            for i in range(start, len(basis)):
                z = la.sub(y, basis[i])
                if la.dot(h, z) < 0 or not self.cone.contains(z):
                    continue
                sub = rec(z, i)
                if sub is not None:
                    return (i,) + sub
            return None

        idx = rec(x, 0)
        if idx is None:
            return None
        coeffs = [0] * len(basis)
        for i in idx:
            coeffs[i] += 1
        return tuple(coeffs)


def hilbert_basis(cone: Cone) -> AffineMonoid:
    """Minimal generating set of ``cone ∩ Z^n`` for a pointed cone."""
    if not cone.is_pointed:
        raise NotPointed("Hilbert basis of a cone containing a line")
    if not cone.rays:
        return AffineMonoid(cone, [])
    n = cone.dim
    basis = la.saturated_basis(cone.rays, n)
    coords = [tuple(int(c) for c in la.coordinates(r, basis)) for r in cone.rays]
    k = len(basis)
    cands: set[IntVec] = set(coords)
    for s in placing_triangulation(coords):
        cands.update(parallelepiped_points([coords[i] for i in s]))
    zero = tuple([0] * k)
    cands.discard(zero)
    local = Cone.from_generators(coords, dim=k)
    irreducible = [x for x in cands
                   if not any(y != x and local.contains(la.sub(x, y)) for y in cands)]
    lifted = [tuple(sum(c * b[j] for c, b in zip(x, basis)) for j in range(n))
              for x in irreducible]
    return AffineMonoid(cone, lifted)


def lattice_points_up_to_degree(cone: Cone, degree: int, grading: Sequence[int] | None = None):
    """Lattice points ``x`` of a pointed cone with ``grading.x <= degree``.

    Brute-force box scan; used as an independent oracle.  The box bound comes
    from the fact that every point is a nonnegative combination of the rays,
    so the sum of coefficients is at most ``degree / min ray degree``.
    """
    if grading is None:
        grading = AffineMonoid(cone, []).grading
    degs = [la.dot(grading, r) for r in cone.rays]
    if not degs:
        return [tuple([0] * cone.dim)]
    scale = Fraction(degree) / min(degs)
    bound = int(scale * max(abs(c) for r in cone.rays for c in r)) + 1
    out = []
    for p in itertools.product(range(-bound, bound + 1), repeat=cone.dim):
        if la.dot(grading, p) <= degree and cone.contains(p):
            out.append(p)
    return out


def brute_force_hilbert_basis(cone: Cone) -> list[IntVec]:
    """Oracle: irreducible elements among box-enumerated lattice points.

    Every Hilbert basis element lies in the zonotope spanned by a simplicial
    subcone, so its degree is at most the sum of the ray degrees.
    """
    mon = AffineMonoid(cone, [])
    h = mon.grading
    bound = sum(la.dot(h, r) for r in cone.rays)
    pts = [p for p in lattice_points_up_to_degree(cone, bound, h) if any(p)]
    pts_set = set(pts)
    out = []
    for x in pts:
        if not any(y != x and la.sub(x, y) in pts_set for y in pts if la.dot(h, y) < la.dot(h, x)):
            out.append(x)
    return sorted(out)
