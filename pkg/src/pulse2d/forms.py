"""Quadrature evaluation kernels, one per dispatch region.

Every function takes the evaluator (for precomputed rule data, precision
parameters and instrumentation) plus 1-d backend arrays t, r, and returns
(p, u_r) arrays.  All reductions go through elementwise multiplies and
np.sum(axis=-1) so a batched evaluation reproduces single-point results
bit for bit.

Region conventions (tau = +-t, H = crop radius, eps = target accuracy):

* near field (t + r < 1.05 H): Gauss-Legendre on the cropped oscillatory
  Fourier-Bessel integral over [0, H].
* far field off axis (t - r > 1.152 H, r not tiny): midpoint-offset uniform
  grid; the +-kh node pair is summed in a regularized closed form to kill
  the subtractive cancellation near the front.
* intermediate band: Gauss-Jacobi with weight (1+x)^(-1/2), after cropping
  the half-line at xi = (tau + H)/r - 1 and absorbing the endpoint
  singularity into the weight.
* axis band: Gauss-Legendre in the self-similar variable with both scaled
  modified Bessel kernels; the parity-even combination stays finite at
  r = 0.
"""

from __future__ import annotations

import numpy as np

from .specfun import bessel_j, scaled_i_pair

__all__ = ["form1_eval", "form2_uniform_eval", "form2_jacobi_eval",
           "form3_eval", "form3_components", "small_t_eval", "zero_eval",
           "uniform_paired_terms"]


def _mask(x):
    return np.asarray(x, dtype=bool)


_SPLIT = 134217729.0    # 2**27 + 1, Dekker splitting constant for binary64


def _two_prod(a, b):
    """a * b = p + err exactly in binary64 (no fma needed)."""
    p = a * b
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _two_sum(a, b):
    """a + b = s + err exactly in binary64 (Knuth, no magnitude order)."""
    s = a + b
    bv = s - a
    err = (a - (s - bv)) + (b - bv)
    return s, err


def form1_eval(ev, t, r):
    """Oscillatory near-field integral, cropped at omega = H."""
    bk = ev.backend
    om = ev._f1_omega
    cw = ev._f1_coeff
    ev._tick("bessel_j", 2 * om.size)
    ev._tick("trig", 2 * om.size)
    if bk.dtype is object:
        X = r[..., None] * om
        T = t[..., None] * om
        j0 = bessel_j(0, X, bk)
        j1 = bessel_j(1, X, bk)
        co = bk.cos(T)
        si = bk.sin(T)
    else:
        # arguments reach ~H^2; rounding them costs eps*|arg|/2 ~ 4e-15
        # inside the kernels, so carry the product residual (plus the part
        # of the node below double resolution) to first order
        lo = ev._f1_omega_lo
        X, dx = _two_prod(r[..., None], om)
        T, dt_ = _two_prod(t[..., None], om)
        dx = dx + r[..., None] * lo
        dt_ = dt_ + t[..., None] * lo
        j0r = bessel_j(0, X, bk)
        j1r = bessel_j(1, X, bk)
        cor = bk.cos(T)
        sir = bk.sin(T)
        xs = np.where(X > 1e-12, X, 1.0)
        j1d = np.where(X > 1e-12, j0r - j1r / xs, 0.5)
        j0 = j0r - dx * j1r
        j1 = j1r + dx * j1d
        co = cor - dt_ * sir
        si = sir + dt_ * cor
    p = np.sum(cw * j0 * co, axis=-1)
    u = np.sum(cw * j1 * si, axis=-1)
    return p, u


def _uniform_terms(ev, tau, r):
    """Per-node bracket values for the uniform grid at shift tau.

    Returns (f0, f1) of shape (..., M2): the regularized sum of the +-kh
    node pair where both lie in the domain, the bare +kh term where only it
    does, and exact zero elsewhere.  The pair sum uses

        f_j(kh) + f_j(-kh) = -4 (kh)^2 tau / (r^2 s+ s- D_j),
        D_0 = s+ + s-,   D_1 = (1 + xi+) s- + (1 + xi-) s+,

    with s+- = sqrt(xi+- (xi+- + 2)), which is exact and has no subtractive
    cancellation (every factor is positive when both nodes are live).
    """
    bk = ev.backend
    kh = ev._u_kh
    # route through d = tau - r so the large tau + kh never meets a nearby
    # r head-on; at tau ~ r ~ 400 the naive form loses ~eps*tau of accuracy
    d = (tau - r)[..., None]
    rr = r[..., None]
    xp = (d + kh) / rr
    xm = (d - kh) / rr
    live_p = _mask(xp > 0)
    both = _mask(xm > 0)
    lone = live_p & ~both
    if not live_p.any():
        z = bk.zeros(xp.shape)
        return z, z
    ev._tick("sqrt", 2 * kh.size)
    sp = bk.sqrt(np.where(live_p, xp * (xp + 2), 1))
    sm = bk.sqrt(np.where(both, xm * (xm + 2), 1))
    shared = -4 * (kh * kh) * tau[..., None] / ((r * r)[..., None] * sp * sm)
    pair0 = shared / (sp + sm)
    pair1 = shared / ((1 + xp) * sm + (1 + xm) * sp)
    lone0 = kh / sp
    lone1 = lone0 * (1 + xp)
    f0 = np.where(both, pair0, np.where(lone, lone0, 0.0))
    f1 = np.where(both, pair1, np.where(lone, lone1, 0.0))
    return f0, f1


def _uniform_q(ev, t, r, negated):
    bk = ev.backend
    tau = -t if negated else t
    # no node can be live when tau + max(kh) <= r
    khmax = ev._u_kh[-1]
    if not _mask(tau + khmax > r).any():
        z = bk.zeros(t.shape)
        return z, z
    f0, f1 = _uniform_terms(ev, tau, r)
    pref = ev._u_pref / r
    q0 = pref * np.sum(ev._u_gauss * f0, axis=-1)
    q1 = pref * np.sum(ev._u_gauss * f1, axis=-1)
    return q0, q1


def form2_uniform_eval(ev, t, r):
    """Far-field uniform-grid evaluation (t - r > 1.152 H, r > R1)."""
    q0p, q1p = _uniform_q(ev, t, r, False)
    q0m, q1m = _uniform_q(ev, t, r, True)
    return q0p + q0m, q1p - q1m


def uniform_paired_terms(ev, t, r):
    """Bracket values at one (t, r): (kh nodes, f0 terms, f1 terms)."""
    bk = ev.backend
    f0, f1 = _uniform_terms(ev, bk.asarray([t]), bk.asarray([r]))
    return ev._u_kh, f0[0], f1[0]


def _jacobi_q(ev, t, r, negated):
    """One half-line integral under the Gauss-Jacobi rule at shift tau.

    The substitution xi = b (eta + 1)/2 with crop width b = (tau + H)/r - 1
    maps to [-1, 1]; the endpoint factor xi^(-1/2) becomes the rule weight
    (1 + eta)^(-1/2) and the remaining branch factor 1/sqrt(eta - c) with
    c = -1 - 4/b stays analytic on the interval.  b <= 0 means the whole
    integrand lies beyond the crop radius and contributes nothing at the
    working accuracy.
    """
    bk = ev.backend
    P = ev.params
    tau = -t if negated else t
    # window width tau + H - r built from the small difference d = tau - r;
    # forming r(1 + xi) - tau directly would round at eps*tau, which at the
    # grid extremes is two decades above the target accuracy
    d = tau - r
    span = d + P.H
    live = _mask(span > 0)
    if not live.any():
        z = bk.zeros(t.shape)
        return z, z
    ss = np.where(live, span, 1)
    b = ss / r
    c = -1 - 4 / b
    eta = ev._gj_nodes
    w = ev._gj_weights
    ev._tick("exp", eta.size)
    ev._tick("sqrt", eta.size)
    if bk.dtype is object:
        half_eta = (eta + 1) / 2
        xi = b[..., None] * half_eta
        arg = ss[..., None] * half_eta - d[..., None]
        gauss = bk.exp(-(arg * arg) / 2)
    else:
        # node and product roundings each shift arg by ~eps*d/2 right at
        # the integrand peak; carry both residuals to first order like the
        # near-field rule does with its split node table
        he = ev._gj_he_hi
        xi = b[..., None] * he
        prod, perr = _two_prod(ss[..., None], he)
        arg, serr = _two_sum(prod, -d[..., None])
        darg = serr + perr + ss[..., None] * ev._gj_he_lo
        gauss = bk.exp(-(arg * arg) / 2)
        gauss = gauss - (arg * darg) * gauss
        arg = arg + darg
    op = 1 + xi
    root = bk.sqrt(eta - c[..., None])
    base = (w * gauss) / root
    # u_r integrand regularized: arg/(1+xi) + 1/(r (1+xi)^2) replaces the
    # raw product, removing the front-crossing cancellation
    g1 = arg / op + 1 / (r[..., None] * (op * op))
    q0 = np.sum(base * arg, axis=-1)
    q1 = np.sum(base * g1, axis=-1)
    q0 = np.where(live, ev._inv_sqrt_2pi * q0, 0.0)
    q1 = np.where(live, ev._inv_sqrt_2pi * q1, 0.0)
    return q0, q1


def form2_jacobi_eval(ev, t, r):
    """Intermediate-band evaluation via cropped Gauss-Jacobi half-line sums."""
    q0p, q1p = _jacobi_q(ev, t, r, False)
    q0m, q1m = _jacobi_q(ev, t, r, True)
    return q0p + q0m, q1p - q1m


def form3_components(ev, t, r):
    """Axis-band moment integrals (J01, J03, J12) on backend arrays.

    Valid for t >= (r + H)/(stretching factor) so that a = 1 - (r + H)/t
    is positive; the dispatch regions using this form guarantee it.
    """
    bk = ev.backend
    P = ev.params
    eta = ev._gl_nodes
    w = ev._gl_weights
    a = 1 - (r + P.H) / t
    c = 1 - 2 * t / (r + P.H)
    half = (1 - a) / 2
    xi = (1 + a)[..., None] / 2 + half[..., None] * eta
    zeta = 1 - xi
    arg = (r - t)[..., None] + t[..., None] * xi
    ev._tick("exp", eta.size)
    ev._tick("bessel_i", 2 * eta.size)
    ev._tick("sqrt", eta.size + 1)
    gauss = bk.exp(-(arg * arg) / 2)
    x = (r * t)[..., None] * zeta
    i0, i1 = scaled_i_pair(x, bk)
    root = bk.sqrt((eta - c[..., None]) * (1 + zeta))
    base = (w * bk.sqrt(half)[..., None]) * gauss / root
    bz = base * zeta
    j01 = np.sum(bz * i0, axis=-1)
    j03 = np.sum(bz * (zeta * zeta) * i0, axis=-1)
    j12 = np.sum(bz * zeta * i1, axis=-1)
    return j01, j03, j12


def form3_eval(ev, t, r):
    """Axis-band evaluation; u_r vanishes identically at r = 0."""
    j01, j03, j12 = form3_components(ev, t, r)
    t2 = t * t
    rt = r * t
    p = j01 - t2 * j03 + rt * j12
    u = rt * j01 - t2 * j12
    return p, u


def small_t_eval(ev, t, r):
    """Degenerate early-time limit: the initial pulse, O(eps) velocity."""
    bk = ev.backend
    ev._tick("exp", 1)
    p = bk.exp(-(r * r) / 2)
    return p, -(t * r) * p


def zero_eval(ev, t, r):
    """Ahead of the front beyond the crop radius: identically zero."""
    bk = ev.backend
    return bk.zeros(t.shape), bk.zeros(t.shape)
