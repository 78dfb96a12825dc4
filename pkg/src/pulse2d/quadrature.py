"""Gauss rules by Golub-Welsch, plus the half-integer-offset uniform grid.

Nodes and weights come from the symmetric tridiagonal Jacobi matrix of the
monic three-term recurrence.  Eigenvalues and first eigenvector components
are computed with implicit QL (Wilkinson shifts), carrying only the first
row of the accumulated rotations; weights are mu0 * z_i^2.  The solver is
generic over the numeric backend so extended-precision rules share the code
path.  Rules are deterministic, cached per (backend, kind, m), and marked
read-only after construction.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .numerics import FLOAT64

__all__ = ["GaussRule", "UniformRule", "KIND_LEGENDRE", "KIND_JACOBI",
           "gauss_legendre", "gauss_jacobi_m12", "uniform_rule",
           "rule_cache_get"]

KIND_LEGENDRE = "legendre"
KIND_JACOBI = "jacobi_0_m12"    # weight (1+x)^(-1/2) on (-1, 1)

_MAX_M = 4096


@dataclass(frozen=True)
class GaussRule:
    kind: str
    m: int
    nodes: np.ndarray
    weights: np.ndarray
    mu0: object         # integral of the weight function


@dataclass(frozen=True)
class UniformRule:
    """Trapezoid grid data: callers derive their nodes kh from the step;
    h = sqrt(2 pi / (m2 + 1/2)) balances the two error terms and
    L = (m2 + 1/2) h marks the crop point."""
    m2: int
    h: object
    L: object


def _recurrence(kind, m, bk):
    """Monic recurrence coefficients (a_k, b_k) for k < m, with b_0 = mu0."""
    one = bk.scalar(1)
    a, b = [], []
    if kind == KIND_LEGENDRE:
        for k in range(m):
            a.append(bk.scalar(0))
            if k == 0:
                b.append(bk.scalar(2))
            else:
                kk = bk.scalar(k)
                b.append(kk * kk / (4 * kk * kk - 1))
    elif kind == KIND_JACOBI:
        al = bk.scalar(0)
        be = -one / 2
        for k in range(m):
            if k == 0:
                a.append((be - al) / (al + be + 2))
                b.append(2 * bk.sqrt(bk.scalar(2)))
            else:
                kk = bk.scalar(k)
                nab = 2 * kk + al + be
                a.append((be * be - al * al) / (nab * (nab + 2)))
                num = 4 * kk * (kk + al) * (kk + be) * (kk + al + be)
                b.append(num / (nab * nab * (nab + 1) * (nab - 1)))
    else:
        raise ValueError(f"unknown rule kind {kind!r}")
    return a, b


def _pythag(aa, bb, bk):
    x, y = abs(aa), abs(bb)
    if x > y:
        ratio = y / x
        return x * bk.sqrt(1 + ratio * ratio)
    if y == 0:
        return y
    ratio = x / y
    return y * bk.sqrt(1 + ratio * ratio)


def _imtql2(d, e, z, bk, max_iter=64):
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.

    d: diagonal, overwritten with eigenvalues.  e: off-diagonal (e[0..n-2]
    used, e[n-1] scratch).  z: vector co-rotated with the similarity
    transforms; seeding it with the first unit vector yields the first
    components of normalized eigenvectors.  Raises RuntimeError if an
    eigenvalue needs more than max_iter sweeps.
    """
    n = len(d)
    if n == 1:
        return
    eps = bk.eps
    zero = bk.scalar(0)
    one = bk.scalar(1)
    for l in range(n):
        niter = 0
        while True:
            for m_ in range(l, n - 1):
                dd = abs(d[m_]) + abs(d[m_ + 1])
                if abs(e[m_]) <= eps * dd:
                    break
            else:
                m_ = n - 1
            if m_ == l:
                break
            niter += 1
            if niter > max_iter:
                raise RuntimeError(
                    f"implicit QL failed to converge (n={n}, l={l})")
            g = (d[l + 1] - d[l]) / (2 * e[l])
            rr = _pythag(g, one, bk)
            g = d[m_] - d[l] + e[l] / (g + (rr if g >= 0 else -rr))
            s = one
            c = one
            p = zero
            underflow = False
            for i in range(m_ - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                rr = _pythag(f, g, bk)
                e[i + 1] = rr
                if rr == 0:
                    d[i + 1] = d[i + 1] - p
                    e[m_] = zero
                    underflow = True
                    break
                s = f / rr
                c = g / rr
                g = d[i + 1] - p
                rr = (d[i] - g) * s + 2 * c * b
                p = s * rr
                d[i + 1] = g + p
                g = c * rr - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if underflow:
                continue
            d[l] = d[l] - p
            e[l] = g
            e[m_] = zero


def _golub_welsch(kind, m, bk):
    a, b = _recurrence(kind, m, bk)
    mu0 = b[0]
    d = list(a)
    e = [bk.sqrt(b[k]) for k in range(1, m)] + [bk.scalar(0)]
    z = [bk.scalar(0)] * m
    z[0] = bk.scalar(1)
    _imtql2(d, e, z, bk)
    order = sorted(range(m), key=lambda i: d[i])
    nodes = bk.asarray([d[i] for i in order])
    weights = bk.asarray([mu0 * z[i] * z[i] for i in order])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GaussRule(kind=kind, m=m, nodes=nodes, weights=weights, mu0=mu0)


_cache: dict[tuple, GaussRule] = {}
_cache_lock = threading.Lock()


def rule_cache_get(kind, m, backend=FLOAT64) -> GaussRule:
    """Cached Gauss rule for (kind, m) under the given backend."""
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= _MAX_M:
        raise ValueError(f"node count must be an integer in [1, {_MAX_M}]")
    key = (backend.key, kind, int(m))
    rule = _cache.get(key)
    if rule is None:
        with _cache_lock:
            rule = _cache.get(key)
            if rule is None:
                with backend.workprec():
                    rule = _golub_welsch(kind, int(m), backend)
                _cache[key] = rule
    return rule


def gauss_legendre(m, backend=FLOAT64) -> GaussRule:
    return rule_cache_get(KIND_LEGENDRE, m, backend)


def gauss_jacobi_m12(m, backend=FLOAT64) -> GaussRule:
    return rule_cache_get(KIND_JACOBI, m, backend)


def uniform_rule(m2, backend=FLOAT64) -> UniformRule:
    if not isinstance(m2, (int, np.integer)) or m2 < 1:
        raise ValueError("uniform rule needs a positive integer node count")
    with backend.workprec():
        half = backend.scalar(1) / 2
        h = backend.sqrt(2 * backend.pi / (int(m2) + half))
        L = h * (int(m2) + half)
    return UniformRule(m2=int(m2), h=h, L=L)
