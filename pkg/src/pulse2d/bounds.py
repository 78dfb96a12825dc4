"""Certified a-priori error bounds for the two quadrature families.

Diagnostic only; nothing in the evaluation path calls these.  Both bounds
assume the integrand extends analytically off the real interval:

* trapezoid: f(x) e^{-x^2/2} summed on the grid kh, |k| <= n, with f
  analytic on |Im z| <= 2 pi / h.  The bound combines the crop tail beyond
  L = (n + 1/2) h, the vertical-side contribution at Re z = +-L and the
  aliasing term decaying like e^{-2 pi^2 / h^2}.
* Gauss on [-1, 1]: f analytic inside the ellipse with foci +-1 and
  semi-axes sqrt(2) and 1 (rho = 1 + sqrt 2).  An optional additive term
  accounts for an integrand factor g(x) / sqrt(x - c) whose real branch
  point c lies outside [-1, 1] but possibly inside the ellipse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["TrapezoidBoundInput", "GaussBoundInput", "trapezoid_bound",
           "gauss_bound", "RHO"]

RHO = 1.0 + math.sqrt(2.0)


@dataclass(frozen=True)
class TrapezoidBoundInput:
    h: float            # step size, 0 < h <= pi
    n: int              # one-sided node count; crop point L = (n + 1/2) h
    f0_bound: float     # sup |f| on Im z = +-2 pi / h, |Re z| <= L
    f1_bound: float     # sup |f| on Re z = +-L, |Im z| <= 2 pi / h
    tail_bound: float   # |integral of f e^{-x^2/2} over |x| > L|


@dataclass(frozen=True)
class GaussBoundInput:
    m: int              # node count
    mu0: float          # integral of the rule's weight function
    fmax: float         # sup |f| on the ellipse
    c: float | None = None     # branch point of 1/sqrt(x - c), |c| > 1
    g_c: float | None = None   # |g(c)| for the branch-point term


def trapezoid_bound(inp: TrapezoidBoundInput) -> float:
    if not 0 < inp.h <= math.pi:
        raise ValueError(f"step must satisfy 0 < h <= pi, got {inp.h}")
    if inp.n < 1:
        raise ValueError(f"need at least one node pair, got n={inp.n}")
    if min(inp.f0_bound, inp.f1_bound, inp.tail_bound) < 0:
        raise ValueError("magnitude bounds must be nonnegative")
    L = (inp.n + 0.5) * inp.h
    side = (4.0 * inp.h / math.pi) * math.exp(-L * L / 2.0) * inp.f1_bound
    alias = 5.2 * math.exp(-2.0 * math.pi ** 2 / inp.h ** 2) * inp.f0_bound
    return inp.tail_bound + side + alias


def gauss_bound(inp: GaussBoundInput) -> float:
    if inp.m < 1:
        raise ValueError(f"need at least one node, got m={inp.m}")
    if inp.mu0 <= 0 or inp.fmax < 0:
        raise ValueError("mu0 must be positive and fmax nonnegative")
    total = 4.0 * inp.mu0 * inp.fmax * RHO ** (-2 * inp.m) * (RHO / (RHO - 1.0))
    if inp.c is not None:
        ac = abs(inp.c)
        if ac <= 1.0:
            raise ValueError("branch point must lie outside [-1, 1]")
        gc = abs(inp.g_c) if inp.g_c is not None else 0.0
        if ac < math.sqrt(2.0) and gc > 0.0:
            # log form: the (|c| + sqrt(c^2-1))^(2m-2) factor overflows for
            # large m long before the term itself stops mattering
            cc = inp.c * inp.c
            log_term = (math.log(2.0 * inp.mu0 * gc)
                        + 0.25 * math.log(cc - 1.0)
                        - 0.5 * math.log(2.0 * math.pi * inp.m)
                        - (2 * inp.m - 2) * math.log(ac + math.sqrt(cc - 1.0))
                        - math.log(ac - 1.0))
            total += math.exp(log_term) if log_term > -745.0 else 0.0
    return total
