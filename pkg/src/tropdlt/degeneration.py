"""Toric degeneration data of a tropical manifold.

Everything is combinatorial: the total space is described by the epigraph
polyhedron ``delta`` of ``phi`` and the fan of cones over the cells, chart
rings by Hilbert bases of tangent cones of ``delta``, and the central fibre
by its strata poset with per-stratum toric data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .complexes import Fan, PolyhedralComplex
from .errors import CellNotInComplex, NonIntegralPolarization, NotAVertex
from .hilbert import AffineMonoid, hilbert_basis
from .plfunctions import PLFunction, homogenize
from .polyhedra import Cone, Polyhedron
from .tropman import TropicalManifold, dlt


@dataclass
class TotalSpaceData:
    manifold: TropicalManifold
    delta: Polyhedron
    sigma_fan: Fan
    polarization: PLFunction

    @property
    def n(self) -> int:
        return self.manifold.dim


def _require_integral(T: TropicalManifold):
    if not T.phi.is_integral:
        raise NonIntegralPolarization("polarization must have integral slopes and values")


def total_space(T: TropicalManifold) -> TotalSpaceData:
    """Epigraph ``{(m, r) : m in B, r >= phi(m)}`` and the fan of cones over cells."""
    _require_integral(T)
    ineqs = [(tuple(a) + (0,), b) for a, b in T.B.inequalities]
    eqs = [(tuple(a) + (0,), b) for a, b in T.B.equations]
    for slope, c in T.phi.pieces.values():
        ineqs.append((la.neg(slope) + (Fraction(1),), -c))
    delta = Polyhedron.from_hrep(ineqs, eqs, T.dim + 1)
    fan, pol = homogenize(T.P, T.phi)
    return TotalSpaceData(T, delta, fan, pol)


def asymptotic_fan(data: TotalSpaceData | TropicalManifold) -> Fan:
    """Cones of the total-space fan at height 0, as a fan in Q^n.

    These are the recession cones of the cells.
    """
    T = data.manifold if isinstance(data, TotalSpaceData) else data
    cones = [s.recession_cone() for s in T.P.maximal_cells]
    return Fan.from_cones(cones)


def _star_cones(P: PolyhedralComplex, sigma: Polyhedron) -> list[Cone]:
    """Tangent cones ``R>=0 (tau - y)`` at a relative interior point of ``sigma``."""
    y = sigma.relative_interior_point
    out = []
    for tau in P.maximal_star(sigma):
        gens = [la.sub(v, y) for v in tau.vertices if la.sub(v, y) != (0,) * len(y)]
        out.append(Cone.from_generators(list(gens) + list(tau.rays), tau.lines, P.ambient_dim))
    return out


def quotient_map(sigma: Polyhedron) -> list[tuple[int, ...]]:
    """Rows of a surjection Z^n -> Z^(n - dim sigma) killing ``dir(sigma)``."""
    n = sigma.dim
    dirs = sigma.direction_space
    if not dirs:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return la.annihilator_lattice(dirs, n)


def fan_along(sigma: Polyhedron, P: PolyhedralComplex | TropicalManifold,
              quotient: bool = True) -> Fan:
    """The fan of tangent cones along ``sigma``, projected to ``Q^n / dir(sigma)``.

    With ``quotient=False`` the cones are returned in Q^n with lineality
    space ``dir(sigma)``.
    """
    if isinstance(P, TropicalManifold):
        P = P.P
    if sigma not in P:
        raise CellNotInComplex(f"{sigma!r} is not a cell")
    cones = _star_cones(P, sigma)
    if not quotient:
        return Fan.from_cones(cones)
    q = quotient_map(sigma)
    if not q:
        return Fan.zero(0)
    return Fan.from_cones(c.linear_image(q) for c in cones)


# ---------------------------------------------------------------------------
# central fibre


@dataclass
class Stratum:
    cell: Polyhedron
    dim: int
    toric: object  # polytope (cone picture) or fan (fan picture)


@dataclass
class CentralFiberDescriptor:
    """Strata of both pictures of the central fibre.

    ``cone_picture[c]`` is the stratum ``P_c`` of a cell, a toric variety
    with polytope ``c``; ``fan_picture[c]`` is the stratum ``X_{Sigma_c}``
    given by the quotient fan along ``c``.  ``inclusions`` lists pairs
    ``(tau, sigma)`` with ``tau`` a facet of ``sigma``: in the cone picture
    ``P_tau`` embeds in ``P_sigma``, in the fan picture
    ``X_{Sigma_sigma}`` embeds in ``X_{Sigma_tau}``.
    """

    manifold: TropicalManifold
    cone_picture: dict
    fan_picture: dict
    inclusions: list

    @property
    def components(self) -> list[Stratum]:
        """Irreducible components in the cone picture (one per maximal cell)."""
        return [self.cone_picture[s] for s in self.manifold.P.maximal_cells]

    @property
    def fan_components(self) -> list[Stratum]:
        """Irreducible components in the fan picture (one per minimal cell)."""
        d = max(s.dim for s in self.fan_picture.values())
        return [s for s in self.fan_picture.values() if s.dim == d]


def central_fiber(T: TropicalManifold) -> CentralFiberDescriptor:
    P = T.P
    d = T.B.dimension
    cone_pic, fan_pic = {}, {}
    for c in P.cells:
        cone_pic[c] = Stratum(c, c.dimension, c)
        fan_pic[c] = Stratum(c, d - c.dimension, fan_along(c, P))
    incl = [(t, s) for s in P.cells for t in P.cells
            if t.dimension == s.dimension - 1 and t.is_face_of(s)]
    return CentralFiberDescriptor(T, cone_pic, fan_pic, incl)


def max_normal_fan(p: Polyhedron) -> Fan:
    """Fan of cones ``{d : <d, .> is maximized on p at the vertex w}``."""
    cones = []
    for w in p.vertices:
        ineqs = [la.sub(w, u) for u in p.vertices if u != w] + [la.neg(r) for r in p.rays]
        cones.append(Cone.from_inequalities(ineqs, p.lines, p.dim))
    return Fan.from_cones(cones)


@dataclass
class DualityReport:
    poset_ok: bool
    toric_ok: bool
    dimension_ok: bool
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.poset_ok and self.toric_ok and self.dimension_ok

    def __bool__(self):
        return self.ok


def duality_check(T: TropicalManifold, D: TropicalManifold | None = None) -> DualityReport:
    """Compare the fan picture of ``T`` with the cone picture of its transform.

    The stratum of ``tau`` in the fan picture must match the stratum of the
    dual cell in the cone picture: equal dimension, reversed inclusions, and
    the tangent fan along ``tau`` equal to the normal fan of the dual cell.
    """
    if D is None:
        D = dlt(T)
    fan_side = central_fiber(T)
    cone_side = central_fiber(D)
    dual = D.dual_map
    mism = []
    dim_ok = poset_ok = toric_ok = True
    if sorted(dual.values()) != sorted(cone_side.cone_picture):
        return DualityReport(False, False, False, ["cell sets differ"])
    for tau, st in fan_side.fan_picture.items():
        other = cone_side.cone_picture[dual[tau]]
        if st.dim != other.dim:
            dim_ok = False
            mism.append(("dim", tau))
        if fan_along(tau, T.P, quotient=False) != max_normal_fan(other.toric):
            toric_ok = False
            mism.append(("toric", tau))
    for t, s in fan_side.inclusions:
        if not dual[s].is_face_of(dual[t]):
            poset_ok = False
            mism.append(("poset", t, s))
    n_incl = {(dual[s], dual[t]) for t, s in fan_side.inclusions}
    if n_incl != set(cone_side.inclusions):
        poset_ok = False
        mism.append(("poset", "inclusion sets differ"))
    return DualityReport(poset_ok, toric_ok, dim_ok, mism)


# ---------------------------------------------------------------------------
# chart rings and gluing


@dataclass
class ChartRing:
    """Monoid presentation of the chart ring at a vertex of ``delta``.

    ``t_element`` gives the exponents of the height monomial ``t`` in the
    Hilbert basis, so ``t = prod x_i^{t_element[i]}``.
    """

    vertex: tuple
    monoid: AffineMonoid

    @property
    def hilbert_basis(self):
        return self.monoid.hilbert_basis

    @property
    def t_vector(self) -> tuple[int, ...]:
        n = self.monoid.ambient_rank
        return (0,) * (n - 1) + (1,)

    @property
    def t_element(self) -> tuple[int, ...]:
        return self.monoid.decompose(self.t_vector)

    @property
    def is_free(self) -> bool:
        return self.monoid.is_free


def tangent_cone(delta: Polyhedron, v: Sequence) -> Cone:
    v = la.as_vector(v)
    gens = [la.sub(w, v) for w in delta.vertices if w != v] + list(delta.rays)
    return Cone.from_generators(gens, delta.lines, delta.dim)


def chart_ring(data: TotalSpaceData | TropicalManifold, v: Sequence) -> ChartRing:
    if isinstance(data, TropicalManifold):
        data = total_space(data)
    v = la.as_vector(v)
    if v not in data.delta.vertices:
        raise NotAVertex(f"{v} is not a vertex of the total-space polyhedron")
    cone = tangent_cone(data.delta, v)
    return ChartRing(tuple(v), hilbert_basis(cone))


def chart_rings(data: TotalSpaceData | TropicalManifold) -> list[ChartRing]:
    if isinstance(data, TropicalManifold):
        data = total_space(data)
    return [chart_ring(data, v) for v in data.delta.vertices]


@dataclass
class GluingReport:
    empty_overlap: bool
    ok: bool
    cone_v: Cone | None = None
    cone_w: Cone | None = None
    identification: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _lift(T: TropicalManifold, v):
    return tuple(la.as_vector(v)) + (T.phi(v),)


def localized_cone(data: TotalSpaceData, v: Sequence, tau: Polyhedron) -> Cone:
    """``R>=0 (delta - v~) + R (tau~ - v~)`` with ``~`` the lift to the graph of phi."""
    T = data.manifold
    vt = _lift(T, v)
    slope, _ = T.phi.piece(tau)
    lines = [la.sub(_lift(T, u), vt) for u in tau.vertices]
    lines += [tuple(r) + (la.dot(slope, r),) for r in tau.rays]
    lines += [tuple(l) + (la.dot(slope, l),) for l in tau.lines]
    lines += list(data.delta.lines)
    gens = [la.sub(w, vt) for w in data.delta.vertices] + list(data.delta.rays)
    return Cone.from_generators([g for g in gens if not la.is_zero(g)],
                                [l for l in lines if not la.is_zero(l)], T.dim + 1)


def gluing_check(data: TotalSpaceData | TropicalManifold, v: Sequence, w: Sequence,
                 tau: Polyhedron | None = None) -> GluingReport:
    """Check that the localizations of the charts at ``v`` and ``w`` along ``tau`` agree.

    The identification is the identity on exponents; it is returned on the
    Hilbert basis of the chart at ``v`` after verifying each element lies in
    the localized cone at ``w``.
    """
    if isinstance(data, TropicalManifold):
        data = total_space(data)
    T = data.manifold
    v, w = la.as_vector(v), la.as_vector(w)
    if tau is None:
        tau = next((c for c in T.P.cells if c.contains(v) and c.contains(w)), None)
    if tau is None or not (tau.contains(v) and tau.contains(w)):
        return GluingReport(True, True)
    cv = localized_cone(data, v, tau)
    cw = localized_cone(data, w, tau)
    if cv != cw:
        return GluingReport(False, False, cv, cw)
    ring = chart_ring(data, _lift(T, v))
    ident = {}
    for b in ring.hilbert_basis:
        if not cw.contains(b):
            return GluingReport(False, False, cv, cw)
        ident[b] = b
    return GluingReport(False, True, cv, cw, ident)


# ---------------------------------------------------------------------------
# lift to the graph


@dataclass
class UnimodularWitness:
    """Integral maps identifying the cone over a cell with the cone over its graph.

    ``embedding`` is the injective map ``(m, r) -> (m, <s, m> + c r, r)``;
    ``shear`` is the unimodular map ``(m, h, r) -> (m, h + <s, m> + c r, r)``
    which restricts to ``embedding`` on ``h = 0``.
    """

    cell: Polyhedron
    slope: tuple
    const: int
    embedding: list
    shear: list
    source: Cone
    target: Cone
    verified: bool


def lift_check(T: TropicalManifold, sigma: Polyhedron) -> UnimodularWitness:
    if sigma not in T.P:
        raise CellNotInComplex(f"{sigma!r} is not a cell")
    slope, c = T.phi.piece(sigma)
    if any(x.denominator != 1 for x in slope) or c.denominator != 1:
        raise NonIntegralPolarization("lift needs an integral affine function on the cell")
    s = tuple(int(x) for x in slope)
    c = int(c)
    n = T.dim
    emb = [tuple(int(i == j) for j in range(n + 1)) for i in range(n)]
    emb.append(s + (c,))
    emb.append((0,) * n + (1,))
    shear = [tuple(int(i == j) for j in range(n + 2)) for i in range(n)]
    shear.append(s + (1, c))
    shear.append((0,) * (n + 1) + (1,))
    source = sigma.hom
    gens = [tuple(v) + (la.dot(s, v) + c, 1) for v in sigma.vertices]
    gens += [tuple(r) + (la.dot(s, r), 0) for r in sigma.rays]
    lines = [tuple(l) + (la.dot(s, l), 0) for l in sigma.lines]
    target = Cone.from_generators(gens, lines, n + 2)
    ok = abs(la.det(shear)) == 1
    image = source.linear_image(emb)
    ok = ok and image == target
    if ok and not source.lines:
        hs = hilbert_basis(source).hilbert_basis
        ht = hilbert_basis(target).hilbert_basis
        ok = sorted(tuple(int(x) for x in la.matvec(emb, h)) for h in hs) == list(ht)
    return UnimodularWitness(sigma, s, c, emb, shear, source, target, ok)
