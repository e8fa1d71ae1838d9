"""Landau-Ginzburg potentials from unbounded rays, and the cone mirror pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .complexes import Fan, PolyhedralComplex
from .errors import (
    ExponentNotInvariant,
    NoInteriorPoint,
    NotFullDimensional,
    NotPolarizable,
    PreconditionFailed,
    RayOutsideSupport,
    UnboundedInput,
)
from .plfunctions import PLFunction, convexity_check, pl_from_ray_values
from .polyhedra import Cone, Polyhedron, interior_lattice_points
from .tropman import TropicalManifold, dlt


@dataclass(frozen=True, order=True)
class ExpWeight:
    """The coefficient ``exp(-2 pi alpha)``, kept exact through ``alpha``."""

    alpha: Fraction

    def __float__(self):
        return math.exp(-2 * math.pi * float(self.alpha))

    def __str__(self):
        return "1" if self.alpha == 0 else f"e^(-2pi*{self.alpha})"


@dataclass(frozen=True, order=True)
class Term:
    t_exponent: Fraction
    exponent: tuple
    coefficient: object = Fraction(1)


class LaurentPotential:
    """A finite sum of ``coefficient * z^exponent * t^t_exponent``.

    Terms with the same ``(exponent, t_exponent)`` are merged; rational
    coefficients add, other coefficient kinds must coincide.
    """

    def __init__(self, terms: Sequence = (), dim: int | None = None):
        acc: dict = {}
        for term in terms:
            if not isinstance(term, Term):
                e, t, *c = term
                term = Term(la.as_fraction(t), tuple(int(x) for x in e),
                            _coef(c[0]) if c else Fraction(1))
            if term.t_exponent < 0:
                raise ValueError("t exponents must be nonnegative")
            key = (term.exponent, term.t_exponent)
            if key in acc:
                old = acc[key]
                if isinstance(old, Fraction) and isinstance(term.coefficient, Fraction):
                    acc[key] = old + term.coefficient
                elif old != term.coefficient:
                    raise ValueError(f"conflicting coefficients for {key}")
            else:
                acc[key] = term.coefficient
        self.terms = tuple(sorted((Term(t, e, c) for (e, t), c in acc.items()
                                   if not (isinstance(c, Fraction) and c == 0)),
                                  key=lambda x: (x.t_exponent, x.exponent)))
        self.dim = dim if dim is not None else (len(self.terms[0].exponent) if self.terms else 0)

    def __repr__(self):
        return f"LaurentPotential({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            c = "" if str(t.coefficient) == "1" else f"{t.coefficient}*"
            tt = "" if t.t_exponent == 0 else f"*t^{t.t_exponent}"
            parts.append(f"{c}z^{list(t.exponent)}{tt}")
        return " + ".join(parts)

    def __eq__(self, other):
        return isinstance(other, LaurentPotential) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other):
        return LaurentPotential(self.terms + other.terms, self.dim)

    @property
    def exponents(self) -> set:
        return {t.exponent for t in self.terms}

    @property
    def keys(self) -> set:
        return {(t.exponent, t.t_exponent) for t in self.terms}

    def t_degree(self, e) -> "LaurentPotential":
        """Terms with t exponent ``e``."""
        e = la.as_fraction(e)
        return LaurentPotential([t for t in self.terms if t.t_exponent == e], self.dim)

    def evaluate(self, z: Sequence[complex], t: float = 1.0) -> complex:
        out = 0
        for term in self.terms:
            mono = 1
            for zi, ei in zip(z, term.exponent):
                mono *= zi ** ei
            out += float(term.coefficient) * mono * t ** float(term.t_exponent)
        return out

    def with_coefficients(self, coeffs: Mapping) -> "LaurentPotential":
        return LaurentPotential([Term(t.t_exponent, t.exponent,
                                      _coef(coeffs.get(t.exponent, t.coefficient)))
                                 for t in self.terms], self.dim)


def _coef(c):
    if isinstance(c, (ExpWeight, Fraction)):
        return c
    return la.as_fraction(c)


# ---------------------------------------------------------------------------
# ray classes


@dataclass
class RayClass:
    """Unbounded edges of one cell sharing a direction, up to translation."""

    direction: tuple
    base_points: list
    cells: list
    t_exponent: Fraction | None = None

    @property
    def base_point(self):
        return self.base_points[0]


def _cell_classes(cell: Polyhedron) -> dict:
    out: dict = {}
    for e in cell.faces(1):
        if e.is_bounded or e.lines:
            continue
        out.setdefault(tuple(e.rays[0]), []).append(e.vertices[0])
    return out


def ray_classes(P: PolyhedralComplex | TropicalManifold) -> list[RayClass]:
    """Ray classes over all maximal cells, merged across cells.

    With a tropical manifold the merge key is ``(direction, t_exponent)``;
    for a bare complex it is the direction alone.
    """
    phi = None
    if isinstance(P, TropicalManifold):
        phi, P = P.phi, P.P
    merged: dict = {}
    for s in P.maximal_cells:
        for d, pts in _cell_classes(s).items():
            t = None
            if phi is not None:
                t = _class_exponent(phi, s, d, pts)
            key = (d, t)
            if key in merged:
                merged[key].cells.append(s)
                merged[key].base_points.extend(pts)
            else:
                merged[key] = RayClass(d, list(pts), [s], t)
    return [merged[k] for k in sorted(merged, key=lambda k: (k[0], k[1] or 0))]


def _class_exponent(phi: PLFunction, cell, d, pts) -> Fraction:
    slope, c = phi.pieces[cell]
    vals = {}
    for p in pts:
        vals[p] = (la.dot(slope, la.add(p, d)) + c) - (la.dot(slope, p) + c)
    distinct = set(vals.values())
    if len(distinct) > 1:
        raise ExponentNotInvariant(f"exponent of ray class {d} depends on the base point",
                                   witnesses=sorted(vals.items()))
    return distinct.pop()


def naive_potential(T: TropicalManifold) -> dict:
    """Per maximal cell, the sum of ``z^n`` over its ray classes."""
    n = T.dim
    return {s: LaurentPotential([(d, 0) for d in _cell_classes(s)], n)
            for s in T.P.maximal_cells}


def reconstructed_potential(T: TropicalManifold) -> LaurentPotential:
    """Sum over ray classes of ``z^n t^(phi(n0 + n) - phi(n0))``.

    The exponent is evaluated with the global function at every base
    point of every class; disagreement raises ExponentNotInvariant.
    """
    terms = []
    for rc in ray_classes(T):
        vals = {}
        for p in rc.base_points:
            vals[p] = T.phi(la.add(p, rc.direction)) - T.phi(p)
        if len(set(vals.values())) > 1:
            raise ExponentNotInvariant(f"exponent of ray class {rc.direction} is not invariant",
                                       witnesses=sorted(vals.items()))
        e = next(iter(vals.values()))
        if e < 0:
            raise PreconditionFailed(
                f"ray class {rc.direction} has t-exponent {e} < 0; shift phi by an affine function",
                cell=rc.cells[0])
        terms.append(Term(e, rc.direction, Fraction(1)))
    return LaurentPotential(terms, T.dim)


def restrict_to_component(W: LaurentPotential, T: TropicalManifold,
                          cell: Polyhedron) -> LaurentPotential:
    """Terms of ``W`` surviving on the component of ``cell`` at ``t = 0``.

    In the chart of the component the monomial ``z^n t^e`` has relative
    t-order ``e - <s, n>`` where ``s`` is the slope of ``phi`` on the cell;
    it survives iff ``n`` is a recession direction of the cell and that
    order vanishes.
    """
    rec = cell.recession_cone()
    slope, _ = T.phi.pieces[cell]
    keep = [Term(Fraction(0), t.exponent, t.coefficient) for t in W.terms
            if rec.contains(t.exponent) and t.t_exponent - la.dot(slope, t.exponent) == 0]
    return LaurentPotential(keep, W.dim)


@dataclass
class RestrictionReport:
    ok: bool
    per_cell: dict
    literal_ok: bool
    literal_applicable: bool


def restriction_check(T: TropicalManifold, W: LaurentPotential | None = None) -> RestrictionReport:
    """Compare the reconstructed potential with the naive one, cell by cell.

    ``literal_ok`` compares the t-degree-0 part of ``W`` with the union of
    naive monomials; that statement is only meaningful when ``phi``
    vanishes along every ray class (``literal_applicable``).
    """
    if W is None:
        W = reconstructed_potential(T)
    naive = naive_potential(T)
    per = {}
    for s in T.P.maximal_cells:
        per[s] = restrict_to_component(W, T, s) == naive[s]
    union = set()
    for p in naive.values():
        union |= p.exponents
    literal_ok = W.t_degree(0).exponents == union
    applicable = all(rc.t_exponent == 0 for rc in ray_classes(T))
    return RestrictionReport(all(per.values()), per, literal_ok, applicable)


def fano_potential(delta: Polyhedron) -> LaurentPotential:
    """One term ``exp(-2 pi alpha) z^n`` per facet ``<n, .> + alpha >= 0``."""
    if not delta.is_bounded:
        raise UnboundedInput("Fano potential needs a polytope")
    if not delta.is_full_dimensional:
        raise NotFullDimensional("Fano potential needs a full-dimensional polytope")
    return LaurentPotential([Term(Fraction(0), a, ExpWeight(Fraction(b)))
                             for a, b in delta.inequalities], delta.dim)


# ---------------------------------------------------------------------------
# cones, fans and the mirror pair


def fan_of_cone(cone: Cone) -> Fan:
    return Fan.from_cones([cone])


def star_subdivision(C: Cone | Fan, ray: Sequence) -> Fan:
    """Stellar subdivision of a fan (or the fan of one cone) at ``ray``."""
    fan = fan_of_cone(C) if isinstance(C, Cone) else C
    ray = la.primitive(ray)
    if ray in fan.rays:
        return fan
    tau = next((c for c in fan.cones if c.contains_in_relative_interior(ray)), None)
    if tau is None:
        raise RayOutsideSupport(f"{ray} is not in the support of the fan")
    new = []
    for C in fan.maximal_cones:
        if not tau.is_face_of(C):
            new.append(C)
            continue
        for F in C.faces():
            if F.dimension == C.dimension - 1 and not tau.is_face_of(F):
                new.append(Cone.from_generators(list(F.rays) + [ray], F.lines, C.dim))
    return Fan.from_cones(new)


def _rays_of(fan: Fan) -> list:
    return list(fan.rays)


def default_polarization(fan: Fan) -> PLFunction:
    """A strictly convex homogeneous function on a fan refining a convex cone.

    Zero if there are no interior walls; otherwise squared-norm ray values,
    falling back to a linear program on the ray values.
    """
    if not fan.interior_walls():
        return PLFunction.zero(fan)
    rays = _rays_of(fan)
    phi = pl_from_ray_values(fan, {r: la.dot(r, r) for r in rays})
    if phi is not None and convexity_check(phi).strictly_convex:
        return phi
    return _lp_polarization(fan, rays)


def _lp_polarization(fan: Fan, rays) -> PLFunction:
    import numpy as np
    from scipy.optimize import linprog

    idx = {r: i for i, r in enumerate(rays)}
    m = len(rays)
    n = fan.ambient_dim
    # slope of cone C as a linear map of the ray values: s = G^{-1} h_G
    slope_maps = {}
    a_eq, b_eq = [], []
    for s in fan.maximal_cells:
        cr = list(s.rays)
        basis = []
        for r in cr:
            if la.rank(basis + [r]) == len(basis) + 1:
                basis.append(r)
        inv = [la.solve(basis, tuple(int(i == j) for i in range(len(basis)))) for j in range(len(basis))]
        # s = sum_j h_{basis_j} * inv[j]
        coeff = np.zeros((n, m))
        for j, b in enumerate(basis):
            for k in range(n):
                coeff[k, idx[b]] += float(inv[j][k])
        slope_maps[s] = coeff
        for r in cr:
            if r in basis:
                continue
            row = np.array([float(x) for x in r]) @ coeff
            row[idx[r]] -= 1
            a_eq.append(row)
            b_eq.append(0.0)
    a_ub, b_ub = [], []
    for _, s1, s2 in fan.interior_walls():
        for a, b in ((s1, s2), (s2, s1)):
            for r in b.rays:
                if r in a.rays:
                    continue
                row = np.array([float(x) for x in r]) @ slope_maps[a]
                row[idx[r]] -= 1
                a_ub.append(row)
                b_ub.append(-1.0)
    res = linprog(np.ones(m), A_ub=np.array(a_ub) if a_ub else None,
                  b_ub=np.array(b_ub) if b_ub else None,
                  A_eq=np.array(a_eq) if a_eq else None, b_eq=np.array(b_eq) if b_eq else None,
                  bounds=[(0, None)] * m, method="highs")
    if res.status != 0:
        raise NotPolarizable("no strictly convex function on this fan")
    for limit in (10, 100, 1000, 10**6):
        vals = [Fraction(float(x)).limit_denominator(limit) for x in res.x]
        den = 1
        for v in vals:
            den = la.lcm(den, v.denominator)
        phi = pl_from_ray_values(fan, {r: v * den for r, v in zip(rays, vals)})
        if phi is not None and convexity_check(phi).strictly_convex:
            return phi
    raise NotPolarizable("linear program solution could not be certified")


@dataclass
class MirrorPair:
    sigma: Cone
    sigma_check: Cone
    Sigma: Fan
    Sigma_check: Fan
    phi: PLFunction
    phi_check: PLFunction
    P: Polyhedron
    P_check: Polyhedron
    W: LaurentPotential
    W_check: LaurentPotential
    coefficients: dict = field(default_factory=dict)

    def swapped(self) -> "MirrorPair":
        return mirror_pair(self.sigma_check, self.Sigma_check, self.Sigma,
                           self.coefficients, self.phi_check, self.phi)


def _ray_potential(fan: Fan, phi: PLFunction, coeffs: Mapping) -> LaurentPotential:
    terms = []
    for r in fan.rays:
        terms.append(Term(phi(r), r, _coef(coeffs.get(r, 1))))
    return LaurentPotential(terms, fan.ambient_dim)


def _dual_polyhedron(fan: Fan, phi: PLFunction) -> Polyhedron:
    """``{n : <n, m> + phi(m) >= 0 for all m in the support}``."""
    ineqs = [(r, phi(r)) for r in fan.rays]
    lines = []
    for c in fan.maximal_cells:
        lines.extend(c.lines)
    eqs = [(l, phi(l)) for l in lines]
    return Polyhedron.from_hrep(ineqs, eqs, fan.ambient_dim)


def mirror_pair(sigma: Cone, Sigma: Fan | None = None, Sigma_check: Fan | None = None,
                coefficients: Mapping | None = None, phi: PLFunction | None = None,
                phi_check: PLFunction | None = None) -> MirrorPair:
    """Both potentials of a cone with refinements of it and of its dual.

    ``W_check`` sums ``c_m z^m t^phi(m)`` over the rays ``m`` of ``Sigma``;
    ``W`` sums ``c_n z^n t^phi_check(n)`` over the rays of ``Sigma_check``.
    """
    if not sigma.is_pointed or not sigma.is_full_dimensional:
        raise NotFullDimensional("mirror_pair needs a pointed full-dimensional cone")
    sigma_check = sigma.dual()
    Sigma = Sigma or fan_of_cone(sigma)
    Sigma_check = Sigma_check or fan_of_cone(sigma_check)
    for f, c in ((Sigma, sigma), (Sigma_check, sigma_check)):
        if not f.refines(c):
            raise ValueError("fan does not refine its cone")
    phi = phi or default_polarization(Sigma)
    phi_check = phi_check or default_polarization(Sigma_check)
    coeffs = {tuple(k): v for k, v in (coefficients or {}).items()}
    W_check = _ray_potential(Sigma, phi, coeffs)
    W = _ray_potential(Sigma_check, phi_check, coeffs)
    P_check = _dual_polyhedron(Sigma, phi)
    P = _dual_polyhedron(Sigma_check, phi_check)
    return MirrorPair(sigma, sigma_check, Sigma, Sigma_check, phi, phi_check, P, P_check,
                      W, W_check, coeffs)


def fan_manifold(fan: Fan, phi: PLFunction) -> TropicalManifold:
    return TropicalManifold(fan, phi, check=False)


def cross_check_dual_polyhedron(mp: MirrorPair) -> bool:
    """The transform of ``(sigma, Sigma, phi)`` has support ``-P_check``."""
    D = dlt(fan_manifold(mp.Sigma, mp.phi), check=False)
    return D.B == mp.P_check.negate()


# ---------------------------------------------------------------------------
# Gorenstein combinatorics


@dataclass
class GorensteinReport:
    interior_points: list
    delta_prime_dim: int
    kappa: int
    divisor_index_set: list
    notes: str = ("smoothness of the toric variety and projectivity of the resolution "
                  "are hypotheses that are not checked here")


def gorenstein_report(delta: Polyhedron, n: int | None = None) -> GorensteinReport:
    """Interior lattice points, ``dim conv(interior)`` and ``min(that, n - 2)``."""
    if n is None:
        n = delta.dim + 1
    pts = interior_lattice_points(delta)
    if not pts:
        raise NoInteriorPoint("the polytope has no interior lattice point")
    dp = Polyhedron.from_vrep(pts, dim=delta.dim).dimension
    return GorensteinReport(pts, dp, min(dp, n - 2), list(pts))
