"""Exact rational and integral linear algebra on tuples.

Vectors are tuples of ``int`` or ``Fraction``; matrices are sequences of row
vectors.  Everything here is small-dimensional bookkeeping, so plain Gaussian
elimination over ``Fraction`` is used throughout.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from operator import mul
from typing import Iterable, Sequence

from .errors import ZeroVector

Vector = tuple


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: the exact core never guesses a rational from a float.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact rational")


def as_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(map(mul, u, v), 0)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def neg(v: Sequence) -> tuple:
    return tuple(-a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b)


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Scale ``v`` by the lcm of its denominators (positive factor)."""
    if all(type(x) is int for x in v):
        return tuple(v)
    v = as_vector(v)
    if all(x.denominator == 1 for x in v):
        return tuple(x.numerator for x in v)
    m = reduce(lcm, (x.denominator for x in v), 1)
    return tuple(int(x * m) for x in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """The primitive integral vector on the ray spanned by ``v``.

    >>> primitive((2, 4))
    (1, 2)
    >>> primitive((Fraction(1, 2), Fraction(3, 2)))
    (1, 3)
    """
    w = clear_denominators(v)
    g = reduce(gcd, w, 0)
    if g == 0:
        raise ZeroVector("primitive() of the zero vector")
    return tuple(x // g for x in w)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q.

    Returns ``(rows, pivots)`` with zero rows dropped.
    """
    m = [list(as_vector(r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    rows = [r for r in rows if not is_zero(r)]
    if not rows:
        return 0
    return _int_rank([clear_denominators(r) for r in rows])


def _int_rank(rows: list[tuple[int, ...]]) -> int:
    # fraction-free elimination; cheap for the tiny matrices used here
    m = [list(r) for r in rows]
    n = len(m[0])
    rk = 0
    for c in range(n):
        p = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rk], m[p] = m[p], m[rk]
        pv = m[rk][c]
        for i in range(rk + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = [pv * a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(rows: Sequence[Sequence], n: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x in Q^n : r.x = 0 for every row r}``."""
    red, piv = rref(rows, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def canonical_basis(vectors: Iterable[Sequence], n: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integral basis of a subspace: RREF rows made primitive."""
    vectors = [v for v in vectors if not is_zero(v)]
    if not vectors:
        return ()
    red, _ = rref(vectors, n)
    return tuple(primitive(r) for r in red)


def project_out(v: Sequence, basis: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Orthogonal projection of ``v`` onto the complement of ``span(basis)``."""
    if not basis:
        return as_vector(v)
    if all(dot(x, v) == 0 for x in basis):
        return tuple(v)
    v = as_vector(v)
    b = [as_vector(x) for x in basis]
    gram = [[dot(x, y) for y in b] for x in b]
    rhs = [dot(x, v) for x in b]
    coeffs = solve(gram, rhs)
    for c, x in zip(coeffs, b):
        v = sub(v, scale(c, x))
    return v


def project_out_integral(v: Sequence, basis: Sequence[Sequence]) -> tuple[int, ...]:
    """A positive integral multiple of ``project_out(v, basis)``."""
    w = clear_denominators(v)
    if not basis or all(dot(x, w) == 0 for x in basis):
        return w
    b = [clear_denominators(x) for x in basis]
    gram = [[dot(x, y) for y in b] for x in b]
    coeffs = solve(gram, [dot(x, w) for x in b])
    m = reduce(lcm, (Fraction(c).denominator for c in coeffs), 1)
    out = [m * a for a in w]
    for c, x in zip(coeffs, b):
        k = int(c * m)
        if k:
            out = [a - k * xi for a, xi in zip(out, x)]
    return tuple(out)


def project_onto(v: Sequence, basis: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Orthogonal projection of ``v`` onto ``span(basis)``."""
    v = as_vector(v)
    return sub(v, project_out(v, basis))


def solve(a: Sequence[Sequence], b: Sequence):
    """One solution of ``a x = b`` over Q, or ``None`` if inconsistent."""
    if not a:
        return ()
    n = len(a[0])
    aug = [tuple(as_vector(row)) + (as_fraction(bi),) for row, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return tuple(x)


def det(m: Sequence[Sequence]) -> Fraction:
    a = [list(as_vector(r)) for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def transpose(m: Sequence[Sequence]) -> list[tuple]:
    return [tuple(col) for col in zip(*m)]


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def _column_hermite(rows: Sequence[Sequence], n: int):
    """Unimodular column reduction of an integer matrix.

    Returns ``(a, ut, pivots)``: ``a`` is the reduced matrix ``A U`` (rows),
    ``ut`` holds the columns of ``U`` as rows, and ``pivots`` maps a row index
    to the column in which that row has its pivot.
    """
    a = [list(r) for r in rows]
    ut = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = {}
    col = 0
    for row in range(len(a)):
        while True:
            nz = [j for j in range(col, n) if a[row][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(a[row][j]))
            _swap_cols(a, ut, col, j0)
            done = True
            for j in range(col + 1, n):
                if a[row][j]:
                    q = a[row][j] // a[row][col]
                    _sub_col(a, ut, j, col, q)
                    if a[row][j]:
                        done = False
            if done:
                pivots[row] = col
                col += 1
                break
    return a, ut, pivots


def integer_kernel(rows: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Lattice basis of ``{x in Z^n : r.x = 0 for every row r}``.

    Unimodular column operations bring the matrix to ``[H | 0]``; the columns
    of the transformation under the zero block span the kernel lattice.
    """
    a = [clear_denominators(r) for r in rows if not is_zero(r)]
    _, ut, pivots = _column_hermite(a, n)
    return [tuple(ut[j]) for j in range(len(pivots), n)]


def integer_solve(rows: Sequence[Sequence[int]], b: Sequence[int], n: int):
    """An integral solution of ``A x = b`` or ``None`` if there is none."""
    if not rows:
        return tuple([0] * n)
    a, ut, pivots = _column_hermite([tuple(int(x) for x in r) for r in rows], n)
    y = [0] * n
    for i, row in enumerate(a):
        acc = sum(row[c] * y[c] for c in range(len(pivots)) if c != pivots.get(i))
        rhs = as_fraction(b[i]) - acc
        if i in pivots:
            c = pivots[i]
            q = rhs / row[c]
            if q.denominator != 1:
                return None
            y[c] = int(q)
        elif rhs != 0:
            return None
    x = [0] * n
    for c in range(len(pivots)):
        if y[c]:
            x = [xi + y[c] * u for xi, u in zip(x, ut[c])]
    return tuple(x)


def _swap_cols(a, ut, i, j):
    if i == j:
        return
    for r in a:
        r[i], r[j] = r[j], r[i]
    ut[i], ut[j] = ut[j], ut[i]


def _sub_col(a, ut, j, i, q):
    for r in a:
        r[j] -= q * r[i]
    ut[j] = [x - q * y for x, y in zip(ut[j], ut[i])]


def saturated_basis(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Lattice basis of ``span(vectors) ∩ Z^n``."""
    vectors = [v for v in vectors if not is_zero(v)]
    if not vectors:
        return []
    perp = nullspace(vectors, n)
    if not perp:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel(perp, n)


def annihilator_lattice(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Lattice basis of ``{y in Z^n : y.v = 0 for v in vectors}``."""
    return integer_kernel(list(vectors), n)


def minors_gcd(vectors: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of the matrix with the given rows."""
    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in combinations(range(n), k):
        d = det([[v[c] for c in cols] for v in vectors])
        g = gcd(g, int(d))
        if g == 1:
            return 1
    return g


def coordinates(v: Sequence, basis: Sequence[Sequence]):
    """Coordinates of ``v`` in ``basis`` (rows), or None if not in the span."""
    return solve(transpose(basis), v) if basis else (() if is_zero(v) else None)
