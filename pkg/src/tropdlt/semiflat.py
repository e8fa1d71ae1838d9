"""Floating-point companion: smooth potentials, moment maps, numerical
Legendre duality, rescalings and the piecewise-linear limit.

The toric potential of exponent rows ``a_j`` is

    K(y) = 1/(4 pi) * log sum_j exp(-4 pi <a_j, y>)

whose gradient is the moment map ``-sum_j |phi_j|^2 a_j / sum_j |phi_j|^2``
evaluated at ``w = exp(-2 pi y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp, softmax

from .errors import NotStrictlyConvex, ZeroCoordinate

FOUR_PI = 4 * math.pi


def embedding_exponents(a) -> np.ndarray:
    """Validate and return the exponent matrix (rows ``a_j``)."""
    arr = np.asarray(a, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if len({tuple(r) for r in arr.tolist()}) != len(arr):
        raise ValueError("exponent rows must be distinct")
    return arr


def moment_map(a, w) -> np.ndarray:
    """``-sum |phi_j(w)|^2 a_j / sum |phi_j(w)|^2`` with ``phi_j(w) = prod w_k^a_jk``."""
    a = embedding_exponents(a)
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if np.any(w == 0):
        raise ZeroCoordinate("moment map needs nonzero coordinates")
    logs = 2.0 * (a @ np.log(np.abs(w)))
    p = softmax(logs)
    return -(p @ a)


class SmoothPotential:
    """A convex function with value, gradient and Hessian."""

    kind = "abstract"

    def __init__(self, dim: int):
        self.dim = dim

    def __call__(self, y) -> float:
        return self.value(y)

    def value(self, y) -> float:
        raise NotImplementedError

    def gradient(self, y) -> np.ndarray:
        return numeric_gradient(self.value, y)

    def hessian(self, y, h: float = 1e-4) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        n = len(y)
        out = np.empty((n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            out[:, i] = (self.gradient(y + e) - self.gradient(y - e)) / (2 * h)
        return (out + out.T) / 2


def numeric_gradient(f: Callable, y, h: float = 1e-5) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    g = np.empty_like(y)
    for i in range(len(y)):
        e = np.zeros_like(y)
        e[i] = h
        g[i] = (f(y + e) - f(y - e)) / (2 * h)
    return g


class Quadratic(SmoothPotential):
    """``K(y) = 1/2 |y|^2``."""

    kind = "quadratic"

    def value(self, y):
        y = np.asarray(y, dtype=float)
        return 0.5 * float(y @ y)

    def gradient(self, y):
        return np.asarray(y, dtype=float).copy()

    def hessian(self, y, h=None):
        return np.eye(len(np.atleast_1d(y)))


class ToricPotential(SmoothPotential):
    kind = "toric"

    def __init__(self, a):
        self.a = embedding_exponents(a)
        super().__init__(self.a.shape[1])

    def _logits(self, y):
        return -FOUR_PI * (self.a @ np.atleast_1d(np.asarray(y, dtype=float)))

    def value(self, y):
        return float(logsumexp(self._logits(y))) / FOUR_PI

    def gradient(self, y):
        p = softmax(self._logits(y))
        return -(p @ self.a)

    def hessian(self, y, h=None):
        p = softmax(self._logits(y))
        mu = p @ self.a
        second = (self.a.T * p) @ self.a
        return FOUR_PI * (second - np.outer(mu, mu))


class CustomPotential(SmoothPotential):
    """A user-supplied function, differentiated numerically unless ``grad`` is given."""

    kind = "custom"

    def __init__(self, dim: int, f: Callable, grad: Callable | None = None):
        super().__init__(dim)
        self.f = f
        self.grad = grad

    def value(self, y):
        return float(self.f(np.asarray(y, dtype=float)))

    def gradient(self, y):
        if self.grad is not None:
            return np.asarray(self.grad(np.asarray(y, dtype=float)), dtype=float)
        return numeric_gradient(self.value, y)


class Rescaled(SmoothPotential):
    """``factor * K(y / r)`` with ``factor`` 1, r or r^2 by mode."""

    kind = "rescaled"
    MODES = {"pullback": 0, "scaled": 1, "simultaneous": 2}

    def __init__(self, base: SmoothPotential, r: float, mode: str):
        if r <= 0:
            raise ValueError("r must be positive")
        if mode not in self.MODES:
            raise ValueError(f"unknown mode {mode!r}")
        super().__init__(base.dim)
        self.base, self.r, self.mode = base, float(r), mode
        self.factor = self.r ** self.MODES[mode]

    def value(self, y):
        return self.factor * self.base.value(np.asarray(y, dtype=float) / self.r)

    def gradient(self, y):
        return self.factor / self.r * self.base.gradient(np.asarray(y, dtype=float) / self.r)

    def hessian(self, y, h=None):
        return self.factor / self.r ** 2 * self.base.hessian(np.asarray(y, dtype=float) / self.r)


class Conjugate(SmoothPotential):
    """``K*(z) = sup_y <z, y> - K(y)``; the maximizer is found by Newton's method."""

    kind = "conjugate"

    def __init__(self, base: SmoothPotential, start=None):
        super().__init__(base.dim)
        self.base = base
        self.start = np.zeros(base.dim) if start is None else np.asarray(start, dtype=float)

    def argmax(self, z, tol: float = 1e-13, maxiter: int = 100) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        y = self.start.copy()
        for _ in range(maxiter):
            g = self.base.gradient(y) - z
            if np.max(np.abs(g)) < tol:
                break
            step = np.linalg.solve(self.base.hessian(y), g)
            # damp so the objective keeps increasing
            t = 1.0
            f0 = z @ y - self.base.value(y)
            while t > 1e-8 and z @ (y - t * step) - self.base.value(y - t * step) < f0 - 1e-15:
                t /= 2
            y = y - t * step
        return y

    def value(self, z):
        y = self.argmax(z)
        return float(np.asarray(z, dtype=float) @ y - self.base.value(y))

    def gradient(self, z):
        return self.argmax(z)

    def hessian(self, z, h=None):
        return np.linalg.inv(self.base.hessian(self.argmax(z)))


def potential_value(K: SmoothPotential, y) -> float:
    return K.value(np.atleast_1d(np.asarray(y, dtype=float)))


@dataclass
class GradientReport:
    applicable: bool
    max_deviation: float
    numeric: np.ndarray | None = None
    moment: np.ndarray | None = None
    note: str = ""


def gradient_identity_check(a_or_K, y, h: float = 1e-5) -> GradientReport:
    """Central-difference gradient of K against the moment map at ``exp(-2 pi y)``."""
    if not 1e-7 <= h <= 1e-3:
        raise ValueError("step must lie in [1e-7, 1e-3]")
    if isinstance(a_or_K, SmoothPotential):
        if not isinstance(a_or_K, ToricPotential):
            return GradientReport(False, float("nan"),
                                  note=f"{a_or_K.kind} potential has no moment map")
        K = a_or_K
    else:
        K = ToricPotential(a_or_K)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    num = numeric_gradient(K.value, y, h)
    mom = moment_map(K.a, np.exp(-2 * math.pi * y))
    return GradientReport(True, float(np.max(np.abs(num - mom))), num, mom)


def legendre_dual(K: SmoothPotential, y, cond_limit: float = 1e12):
    """Dual coordinates ``grad K(y)`` and dual value ``<grad K(y), y> - K(y)``."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    H = K.hessian(y)
    ev = np.linalg.eigvalsh(H)
    if ev[0] <= 0 or ev[-1] / ev[0] > cond_limit:
        raise NotStrictlyConvex(f"Hessian is not positive definite at {y}")
    yc = K.gradient(y)
    return yc, float(yc @ y - K.value(y))


def rescale_family(K: SmoothPotential, r: float, mode: str) -> Rescaled:
    return Rescaled(K, r, mode)


@dataclass
class PLLimitReport:
    r_list: list
    errors: list
    bounds: list
    within_bound: bool
    decreasing: bool
    fitted_C: float
    samples: int
    per_r_ok: list = field(default_factory=list)


def sample_window(window, num: int = 41) -> np.ndarray:
    """Grid of sample points; ``window`` is a list of ``(lo, hi)`` per coordinate."""
    axes = [np.linspace(lo, hi, num) for lo, hi in window]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def pl_limit_function(a, y) -> np.ndarray:
    """``max_j <a_j, -y>``: the support function of ``conv(a)`` at ``-y``."""
    a = embedding_exponents(a)
    return np.max(-(np.atleast_2d(y) @ a.T), axis=1)


def pl_limit_check(a, r_list: Sequence[float], window, num: int = 41) -> PLLimitReport:
    """Sup error of ``K(r y)/r`` against the PL limit over a sampled window.

    The log-sum-exp bound gives ``0 <= K(r y)/r - limit <= log(m+1)/(4 pi r)``
    for ``m + 1`` exponent rows.
    """
    a = embedding_exponents(a)
    K = ToricPotential(a)
    ys = sample_window(window, num)
    limit = pl_limit_function(a, ys)
    errors, bounds, ok = [], [], []
    for r in r_list:
        vals = np.array([K.value(r * y) / r for y in ys])
        diff = vals - limit
        bound = math.log(len(a)) / (FOUR_PI * r)
        errors.append(float(np.max(np.abs(diff))))
        bounds.append(bound)
        ok.append(bool(np.all(diff >= -1e-15) and np.all(diff <= bound * (1 + 1e-12))))
    decreasing = all(e2 <= e1 for e1, e2 in zip(errors, errors[1:]))
    C = max(e * r for e, r in zip(errors, r_list))
    return PLLimitReport(list(r_list), errors, bounds, all(ok), decreasing, C, len(ys), ok)


def sweep(K: SmoothPotential, ys) -> list[list[float]]:
    """Rows ``[y..., K(y), grad K(y)...]`` for a numeric table."""
    out = []
    for y in np.atleast_2d(ys):
        out.append(list(map(float, y)) + [K.value(y)] + list(map(float, K.gradient(y))))
    return out
