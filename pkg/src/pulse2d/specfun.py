"""Bessel kernels and the exact double factorial.

J0/J1 feed the oscillatory quadrature; the exponentially scaled modified
functions e^{-x} I0(x) and e^{-x} I1(x) feed the Kirchhoff-type form.  Only
the scaled I_j are exposed: the unscaled ones overflow near x ~ 700 while
the scaled ones stay O(1) for every x >= 0.  Each call costs O(1) kernel
work; there is no internal accuracy iteration.

Double precision delegates to scipy's Cephes/amos wrappers.  The extended
path uses mpmath for J0/J1 and an in-house series/large-x pair for the
scaled I_j, which mpmath only provides unscaled (and slowly) at large
argument.
"""

from __future__ import annotations

import mpmath
import numpy as np
from scipy import special as _sp

from .numerics import FLOAT64, lift_elementwise

__all__ = ["bessel_j", "scaled_bessel_i", "scaled_i_pair", "double_factorial"]


def bessel_j(order, x, backend=FLOAT64):
    """J_order(x) for order in {0, 1}, elementwise over x."""
    if order not in (0, 1):
        raise ValueError(f"Bessel J order must be 0 or 1, got {order!r}")
    if backend.dtype is object:
        with mpmath.workdps(backend.dps + 5):
            return lift_elementwise(lambda v: mpmath.besselj(order, v))(x)
    return _sp.j0(x) if order == 0 else _sp.j1(x)


def scaled_bessel_i(order, x, backend=FLOAT64):
    """e^{-x} I_order(x) for order in {0, 1} and x >= 0, elementwise."""
    if order not in (0, 1):
        raise ValueError(f"Bessel I order must be 0 or 1, got {order!r}")
    if backend.dtype is object:
        dps = backend.dps
        return lift_elementwise(
            lambda v: _mp_scaled_i_pair(v, dps)[order])(x)
    return _sp.i0e(x) if order == 0 else _sp.i1e(x)


def scaled_i_pair(x, backend=FLOAT64):
    """(e^{-x} I0(x), e^{-x} I1(x)) evaluated jointly; x >= 0 elementwise."""
    if backend.dtype is object:
        dps = backend.dps
        arr = np.asarray(x, dtype=object)
        pairs = [_mp_scaled_i_pair(v, dps) for v in arr.ravel()]
        i0 = np.empty(len(pairs), dtype=object)
        i1 = np.empty(len(pairs), dtype=object)
        i0[:] = [p[0] for p in pairs]
        i1[:] = [p[1] for p in pairs]
        return i0.reshape(arr.shape), i1.reshape(arr.shape)
    return _sp.i0e(x), _sp.i1e(x)


def _mp_scaled_i_pair(x, dps):
    """Both scaled kernels for one mpf x >= 0.

    Power series below the crossover, large-x expansion above it.  The
    crossover max(40, 1.5 dps) keeps the expansion's smallest term, which is
    O(e^{-2x}), below the 10^-(dps+6) stopping tolerance, so the expansion
    always terminates by convergence rather than by divergence.
    """
    with mpmath.workdps(dps + 8):
        x = mpmath.mpf(x)
        if x < 0:
            raise ValueError("scaled I kernels take x >= 0")
        if x == 0:
            return mpmath.mpf(1), mpmath.mpf(0)
        tol = mpmath.mpf(10) ** (-(dps + 6))
        if x <= max(40, 1.5 * dps):
            # sum e^x I_j as positive series, rescale at the end
            q = x * x / 4
            u = mpmath.mpf(1)
            s0 = mpmath.mpf(1)
            s1 = mpmath.mpf(1)      # sum of u_k/(k+1)
            k = 0
            while True:
                k += 1
                u *= q / (k * k)
                s0 += u
                s1 += u / (k + 1)
                if u <= tol * s0:
                    break
            sc = mpmath.exp(-x)
            return sc * s0, sc * (x / 2) * s1
        rt = 1 / mpmath.sqrt(2 * mpmath.pi * x)
        out = []
        for mu in (0, 4):           # mu = 4 nu^2
            term = mpmath.mpf(1)
            s = mpmath.mpf(1)
            k = 0
            while True:
                nxt = term * (((2 * k + 1) ** 2 - mu) / (8 * (k + 1) * x))
                if abs(nxt) <= tol * abs(s):
                    s += nxt
                    break
                if abs(nxt) >= abs(term):
                    break           # unreachable for x above the crossover
                s += nxt
                term = nxt
                k += 1
            out.append(rt * s)
        return out[0], out[1]


def double_factorial(k) -> int:
    """k!! as an exact integer, with (-1)!! = 0!! = 1."""
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValueError(f"double factorial needs an integer, got {k!r}")
    if k < -1:
        raise ValueError(f"double factorial needs k >= -1, got {k}")
    result = 1
    k = int(k)
    while k > 1:
        result *= k
        k -= 2
    return result
