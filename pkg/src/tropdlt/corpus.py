"""Seeded random instances for property tests and the acceptance suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import linalg as la
from .plfunctions import regular_subdivision_from_heights
from .polyhedra import Cone, Polyhedron
from .tropman import TropicalManifold


def box_points(sizes) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(s + 1) for s in sizes)))


def integral_scale(phi):
    """Scale ``phi`` by the lcm of its slope and constant denominators."""
    m = 1
    for slope, c in phi.pieces.values():
        for x in tuple(slope) + (c,):
            m = la.lcm(m, x.denominator)
    return phi.scaled(m) if m != 1 else phi


def random_manifold(rng: random.Random, dim: int, sizes=None, max_height: int = 4,
                    translate: bool = True) -> TropicalManifold:
    """A regular subdivision of a lattice box with random heights.

    The polarization is the lower-hull function scaled to integral slopes,
    which is strictly convex with respect to the induced subdivision.
    """
    if sizes is None:
        sizes = [rng.randint(1, 2) for _ in range(dim)] if dim <= 2 else [1] * dim
    pts = box_points(sizes)
    heights = [rng.randint(0, max_height) for _ in pts]
    P, phi = regular_subdivision_from_heights(pts, heights)
    phi = integral_scale(phi)
    T = TropicalManifold(P, phi)
    if translate:
        t = tuple(rng.randint(-2, 2) for _ in range(dim))
        T = T.translate(t)
    return T


def random_pointed_cone(rng: random.Random, dim: int, nrays: int | None = None,
                        bound: int = 3) -> Cone:
    """A pointed full-dimensional cone from random vectors in an open half-space."""
    while True:
        k = nrays or rng.randint(dim, dim + 2)
        gens = []
        for _ in range(k):
            v = [rng.randint(-bound, bound) for _ in range(dim - 1)] + [rng.randint(1, bound)]
            gens.append(tuple(v))
        c = Cone.from_generators(gens, dim=dim)
        if c.is_full_dimensional:
            return c


def random_cone(rng: random.Random, dim: int, bound: int = 2) -> Cone:
    """A cone that may have lineality and may be lower-dimensional."""
    k = rng.randint(1, dim + 1)
    gens = [tuple(rng.randint(-bound, bound) for _ in range(dim)) for _ in range(k)]
    gens = [g for g in gens if any(g)] or [tuple([1] + [0] * (dim - 1))]
    lines = []
    if rng.random() < 0.3:
        lines.append(tuple(rng.randint(-1, 1) for _ in range(dim)))
        lines = [l for l in lines if any(l)]
    return Cone.from_generators(gens, lines, dim)


def random_lattice_polytope(rng: random.Random, dim: int, bound: int = 2) -> Polyhedron:
    """Convex hull of random lattice points; full-dimensional."""
    while True:
        pts = [tuple(rng.randint(-bound, bound) for _ in range(dim)) for _ in range(dim + 3)]
        p = Polyhedron.from_vrep(pts, dim=dim)
        if p.is_full_dimensional:
            return p


def golden_p1() -> TropicalManifold:
    """``B = [-1, 0]`` with vertices and the segment, ``phi = 0``."""
    return TropicalManifold.from_cells([Polyhedron.from_vrep([(-1,), (0,)])])


def golden_p1_mirror() -> TropicalManifold:
    """``B = R`` broken at 0, ``phi = 0`` on the right and ``-y`` on the left."""
    cells = [Polyhedron.from_vrep([(0,)], rays=[(1,)]), Polyhedron.from_vrep([(0,)], rays=[(-1,)])]
    return TropicalManifold.from_cells(cells, lambda y: max(Fraction(0), -y[0]))
