"""Large-time evaluation near the axis: asymptotic tail sums.

Far behind the front and at small radius the solution reduces to a linear
combination of seven Fourier-type moments I_n(t), n = 0..6, each of which
has a divergent-but-truncated large-t expansion

    sum_{l = ceil(n/2)}^{floor((M-1)/2)}  (2l-1)!! / t^(2l-n+1)

entering with an alternating sign pattern: Re I_n for odd n carries
(-1)^((n-1)/2 + 1), Im I_n for even n carries (-1)^(n/2).  The truncation
index M = floor(H^2) ties the remainder to the working tolerance; in the
dispatch region t >= 1.31 H the term ratio (2l+1)/t^2 stays below 0.59, so
terms decrease monotonically and the sum may stop early once a term drops
below eps/8 (the dropped tail is then below ~0.2 eps).

No kernel evaluations happen here; the cost is O(M) multiplies per point.
"""

from __future__ import annotations

import math

import numpy as np

from .numerics import FLOAT64
from .specfun import double_factorial

__all__ = ["asymptotic_In_real_part", "asymptotic_In_imag_part",
           "asymptotic_remainder_bound", "series_eval"]


def _mask(x):
    return np.asarray(x, dtype=bool)


def _tail_sum(n, t, params, bk, early_stop=True):
    """sum of (2l-1)!!/t^(2l-n+1) over the truncated index range; t is a
    backend array."""
    l0 = (n + 1) // 2
    lmax = (params.M - 1) // 2
    t2 = t * t
    term = bk.scalar(double_factorial(2 * l0 - 1)) / t ** (2 * l0 - n + 1)
    tot = term
    thresh = params.eps / 8
    for l in range(l0, lmax):
        if early_stop:
            live = _mask(term >= thresh)
            if not live.any():
                break
            term = term * ((2 * l + 1) / t2)
            tot = tot + np.where(live, term, 0.0)
        else:
            term = term * ((2 * l + 1) / t2)
            tot = tot + term
    return tot


def asymptotic_In_real_part(n, t, params, backend=FLOAT64, early_stop=True):
    """Re I_n(t) for odd n in {1, 3, 5}; scalar t."""
    if n not in (1, 3, 5):
        raise ValueError(f"real parts are available for n in {{1,3,5}}, got {n}")
    sign = -1 if ((n - 1) // 2) % 2 == 0 else 1
    with backend.workprec():
        s = _tail_sum(n, backend.asarray([t]), params, backend, early_stop)
        return sign * s[0]


def asymptotic_In_imag_part(n, t, params, backend=FLOAT64, early_stop=True):
    """Im I_n(t) for even n in {0, 2, 4, 6}; scalar t."""
    if n not in (0, 2, 4, 6):
        raise ValueError(f"imag parts are available for even n <= 6, got {n}")
    sign = 1 if (n // 2) % 2 == 0 else -1
    with backend.workprec():
        s = _tail_sum(n, backend.asarray([t]), params, backend, early_stop)
        return sign * s[0]


def asymptotic_remainder_bound(n, t, params) -> float:
    """Bound on the truncation remainder of the full I_n sum at index M."""
    M = params.M
    log_r = (0.5 * math.log(math.pi / 2.0) + 0.5 * M * math.log(2.0)
             + math.lgamma(1.0 + M / 2.0) - (M - n) * math.log(float(t)))
    return math.exp(log_r)


def series_eval(ev, t, r):
    """(p, u_r) on backend arrays; valid for r <= R1, t >= 1.31 H."""
    bk = ev.backend
    P = ev.params
    one = bk.scalar(1)
    r2 = r * r
    r4 = r2 * r2
    # polynomial prefactors in r from expanding J0, J1 about the axis
    c1 = 1 - r2 * (3 * one / 4 - r2 * (15 * one / 64))
    c3 = -r2 * (one / 4 - r2 * (5 * one / 32))
    c5 = r4 * (one / 64)
    d0 = r * (one / 2 - r2 * (3 * one / 16 - r2 * (5 * one / 128)))
    d2 = r * (one / 2 - r2 * (3 * one / 8 - r2 * (15 * one / 128)))
    d4 = -r * r2 * (one / 16 - r2 * (5 * one / 128))
    d6 = r * r4 * (one / 384)
    s0 = _tail_sum(0, t, P, bk)
    s1 = _tail_sum(1, t, P, bk)
    s2 = _tail_sum(2, t, P, bk)
    s3 = _tail_sum(3, t, P, bk)
    s4 = _tail_sum(4, t, P, bk)
    s5 = _tail_sum(5, t, P, bk)
    s6 = _tail_sum(6, t, P, bk)
    p = -c1 * s1 + c3 * s3 - c5 * s5
    u = d0 * s0 - d2 * s2 + d4 * s4 - d6 * s6
    return p, u
