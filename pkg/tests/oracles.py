"""Independent reference computations used by the tests.

Nothing here calls into the double description code: facets come from
brute-force searches over generator subsets, hulls from scipy, ranks
from numpy.
"""

import itertools
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull


def np_rank(rows):
    if not rows:
        return 0
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _prim(v):
    from math import gcd
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(v)


def brute_facets(gens):
    """Facet normals of a full-dimensional pointed cone in dimension 2 or 3.

    A candidate normal is orthogonal to a generator (2-D) or to a pair of
    generators (3-D); it is kept when every generator lies on its positive side.
    """
    d = len(gens[0])
    cands = set()
    if d == 2:
        for g in gens:
            for s in (1, -1):
                cands.add(_prim((-s * g[1], s * g[0])))
    elif d == 3:
        for g, h in itertools.combinations(gens, 2):
            c = cross(g, h)
            if any(c):
                cands.add(_prim(c))
                cands.add(_prim(tuple(-x for x in c)))
    else:
        raise ValueError("only dimensions 2 and 3")
    out = []
    for n in cands:
        vals = [sum(a * b for a, b in zip(n, g)) for g in gens]
        if all(v >= 0 for v in vals):
            tight = [g for g, v in zip(gens, vals) if v == 0]
            if np_rank(tight) == d - 1:
                out.append(n)
    return sorted(out)


def in_cone(normals, x):
    return all(sum(a * b for a, b in zip(n, x)) >= 0 for n in normals)


def cone_points(gens, degree):
    """Lattice points of a cone (last coordinate of every generator >= 1) with
    last coordinate at most ``degree``."""
    normals = brute_facets(gens)
    d = len(gens[0])
    ratio = max(abs(Fraction(g[i], g[-1])) for g in gens for i in range(d - 1))
    bound = int(ratio * degree) + 1
    out = []
    for head in itertools.product(range(-bound, bound + 1), repeat=d - 1):
        for h in range(degree + 1):
            x = head + (h,)
            if in_cone(normals, x):
                out.append(x)
    return out


def hilbert_oracle(gens):
    """Irreducible lattice points of the cone, by box enumeration."""
    D = sum(g[-1] for g in gens)
    pts = [p for p in cone_points(gens, D) if any(p)]
    s = set(pts)
    irr = []
    for x in pts:
        if not any(y != x and tuple(a - b for a, b in zip(x, y)) in s for y in pts if y[-1] <= x[-1]):
            irr.append(x)
    return sorted(irr)


def generated_up_to(basis, degree):
    """All sums of basis elements with last coordinate at most ``degree``."""
    d = len(basis[0])
    zero = (0,) * d
    reach = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for b in basis:
                q = tuple(a + c for a, c in zip(p, b))
                if q[-1] <= degree and q not in reach:
                    reach.add(q)
                    nxt.append(q)
        frontier = nxt
    return reach


def hull_vertices(points):
    """Vertex set of a full-dimensional hull via scipy."""
    arr = np.array(points, dtype=float)
    if arr.shape[1] == 1:
        return sorted({(min(p[0] for p in points),), (max(p[0] for p in points),)})
    h = ConvexHull(arr)
    return sorted({tuple(points[i]) for i in h.vertices})


def hull_facet_count(points):
    arr = np.array(points, dtype=float)
    h = ConvexHull(arr)
    eqs = {tuple(np.round(e / np.linalg.norm(e[:-1]), 9)) for e in h.equations}
    return len(eqs)


def support_oracle(points, n):
    return max(sum(Fraction(a) * b for a, b in zip(p, n)) for p in points)


def interior_scan(vertices):
    """Lattice points strictly inside a full-dimensional hull, with scipy facets
    and an exact rational recheck of the strict inequalities."""
    arr = np.array(vertices, dtype=float)
    d = arr.shape[1]
    lo = arr.min(axis=0).astype(int)
    hi = arr.max(axis=0).astype(int)
    if d == 1:
        return [(x,) for x in range(lo[0] + 1, hi[0])]
    h = ConvexHull(arr)
    out = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(np.dot(e[:-1], p) + e[-1] < -1e-9 for e in h.equations):
            out.append(tuple(p))
    return sorted(out)
