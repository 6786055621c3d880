"""The oscillatory power tail C(a, w) = int_lam^inf t^{-w} cos(at) dt and the
truncated cosine moment G(a, z) = int_0^lam cos(ay) y^{z-1} dy.

C is evaluated by contour rotation onto t = lam +/- i s (non-oscillatory,
exponentially damped integrands) for moderate |Im w|.  For large |Im w| the
rotated integrand grows like e^{|Im w| pi/2} before cancelling, so there the
analytically equivalent split

    C(a, w) = Gamma(1-w) sin(pi w / 2) a^{w-1} - G(a, 1-w)

is used instead; G's series has no large terms once |1 - w + k| >= |Im w|.
"""

from __future__ import annotations

import math

import numpy as np

from .context import FLOAT64
from .errors import DomainError, InvalidArgumentError, PoleError
from .gammafn import log_gamma
from .quadrature import gauss_legendre

_IMW_ROTATION_MAX = 8.0  # beyond this the split route takes over


def kappa_factor(w, ctx=FLOAT64):
    """Gamma(1-w) sin(pi w/2); poles at w = 1, 2, 3, ..."""
    ctx.activate()
    w = w if ctx.is_complex(w) else ctx.comp(w)
    one = ctx.comp(1)
    return ctx.exp(log_gamma(one - w, ctx)) * ctx.sin(ctx.comp(ctx.pi) * w / 2)


def cos_moment(a, z, lam, ctx=FLOAT64, max_terms=400):
    """G(a, z) = int_0^lam cos(a y) y^{z-1} dy by its everywhere-convergent
    series sum_k (-1)^k a^{2k} lam^{2k+z} / ((2k)! (2k+z)).

    Analytic continuation off the poles z = 0, -2, -4, ...
    """
    ctx.activate()
    z = z if ctx.is_complex(z) else ctx.comp(z)
    a = ctx.real(a)
    lam = ctx.real(lam)
    zf = ctx.to_complex(z)
    guard = 1e-9 if not ctx.is_hp else 10.0 ** (-(ctx.dps - 8))
    if abs(zf - 2 * round(zf.real / 2)) < guard and zf.real <= guard:
        raise PoleError(f"cos_moment pole at z = {zf}")
    lamz = ctx.exp(z * ctx.log(lam))
    al2 = (a * lam) ** 2
    num = ctx.real(1)          # a^{2k} lam^{2k} / (2k)!
    tot = ctx.comp(0)
    tol = ctx.eps if ctx.is_hp else 1e-19
    aL = float(a) * float(lam)
    for k in range(max_terms):
        term = num * lamz / (2 * k + z)
        tot = tot + (-term if k % 2 else term)
        num = num * al2 / ((2 * k + 1) * (2 * k + 2))
        if float(num) < tol * max(1.0, float(abs(tot))) and 2 * k > aL:
            break
    return tot


def _cos_moment_many_f(a, z, lam, max_terms=400):
    """Vectorised float64 G(a_i, z) over an array of frequencies."""
    a = np.asarray(a, dtype=float)
    zf = complex(z)
    if abs(zf - 2 * round(zf.real / 2)) < 1e-9 and zf.real <= 1e-9:
        raise PoleError(f"cos_moment pole at z = {zf}")
    lamz = lam ** zf if zf.imag == 0 else np.exp(zf * math.log(lam))
    al2 = (a * lam) ** 2
    num = np.ones_like(a)
    tot = np.zeros(a.shape, dtype=complex)
    aLmax = float(np.max(a, initial=0.0)) * lam
    for k in range(max_terms):
        term = num * (lamz / (2 * k + zf))
        tot += -term if k % 2 else term
        num = num * al2 / ((2 * k + 1) * (2 * k + 2))
        if np.max(num, initial=0.0) < 1e-19 * max(1.0, float(np.max(np.abs(tot)))) \
                and 2 * k > aLmax:
            break
    return tot


def _rotation_edges(a, lam, sigma, rtol):
    """Geometric panel edges in s for int_0^inf (lam+is)^{-w} e^{-as} ds."""
    h = min(lam, 1.0 / max(a, 1e-300)) / 4.0
    h = min(h, 16.0 * lam)
    edges = [0.0, h]
    # continue until the integrand bound is negligible
    while True:
        s = edges[-1]
        bound = math.exp(-a * s) * (lam * lam + s * s) ** (-sigma / 2.0)
        scale = max(lam ** (1.0 - sigma), (lam * lam + s * s) ** ((1.0 - sigma) / 2) / max(a * s, 1e-300) if a > 0 else 0.0)
        if a > 0 and bound * min(s, 1.0 / a) < rtol * 1e-3 * max(scale, 1e-300) and a * s > 36.0:
            break
        if a == 0.0 and bound * s < rtol * 1e-3 * lam ** (1.0 - sigma) and sigma > 1.0 and s > lam:
            break
        edges.append(s * 2.0)
        if len(edges) > 220:
            break
    return edges


_GLF = {}


def _gl01(k):
    if k not in _GLF:
        x, w = np.polynomial.legendre.leggauss(k)
        _GLF[k] = (0.5 * (x + 1.0), 0.5 * w)
    return _GLF[k]


def _rotated_integral_f(a, w, lam, edges, k):
    """I = int_0^inf (lam + i s)^{-w} e^{-a s} ds over the given panels."""
    x, ww = _gl01(k)
    total = 0.0 + 0.0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        s = lo + (hi - lo) * x
        f = np.exp(-w * np.log(lam + 1j * s) - a * s)
        total += (hi - lo) * np.dot(ww, f)
    return total


def _cosine_power_tail_rotation_f(a, w, lam, rtol=1e-13):
    sigma = w.real
    edges = _rotation_edges(a, lam, sigma, rtol)
    Ip = _rotated_integral_f(a, w, lam, edges, 24)
    Im_ = np.conj(_rotated_integral_f(a, np.conj(w), lam, edges, 24))
    val = 0.5j * (np.exp(1j * a * lam) * Ip - np.exp(-1j * a * lam) * Im_)
    Ip2 = _rotated_integral_f(a, w, lam, edges, 12)
    Im2 = np.conj(_rotated_integral_f(a, np.conj(w), lam, edges, 12))
    val2 = 0.5j * (np.exp(1j * a * lam) * Ip2 - np.exp(-1j * a * lam) * Im2)
    s_end = edges[-1]
    tail = math.exp(-a * s_end) * (lam * lam + s_end * s_end) ** (-sigma / 2.0) / max(a, 1e-300)
    # cancellation noise of the rotated representation
    noise = 2.2e-16 * math.exp(min(abs(w.imag) * math.pi / 2.0, 700.0)) * max(abs(Ip), abs(Im_))
    return complex(val), abs(val - val2) + tail + noise


def _cosine_power_tail_rotation_hp(a, w, lam, ctx):
    ctx.activate()
    a_r = ctx.real(a)
    lam_r = ctx.real(lam)
    w_c = w if ctx.is_complex(w) else ctx.comp(w)
    sigma = float(w_c.real)
    edges = _rotation_edges(float(a), float(lam), sigma, 10.0 ** (-ctx.dps + 6))
    base = gauss_legendre(32, -1.0, 1.0, ctx)
    i1 = ctx.comp(0, 1)

    def integral(wc):
        tot = ctx.comp(0)
        for lo, hi in zip(edges[:-1], edges[1:]):
            lo_r, hi_r = ctx.real(lo), ctx.real(hi)
            half = (hi_r - lo_r) / 2
            mid = (hi_r + lo_r) / 2
            for t, wt in zip(base.nodes, base.weights):
                s = half * t + mid
                f = ctx.exp(-wc * ctx.log(lam_r + i1 * s) - a_r * s)
                tot = tot + half * wt * f
        return tot

    Ip = integral(w_c)
    Im_ = _conj(integral(_conj(w_c, ctx), ), ctx) if False else None
    wbar = _conj(w_c, ctx)
    Im_ = _conj(integral(wbar), ctx)
    val = i1 / 2 * (ctx.exp(i1 * a_r * lam_r) * Ip - ctx.exp(-i1 * a_r * lam_r) * Im_)
    s_end = edges[-1]
    tail = math.exp(-float(a) * s_end) * (float(lam) ** 2 + s_end ** 2) ** (-sigma / 2.0) / max(float(a), 1e-300)
    noise = float(ctx.eps) * math.exp(min(abs(float(w_c.imag)) * math.pi / 2.0, 700.0)) \
        * max(float(abs(Ip)), float(abs(Im_)))
    return val, tail + noise + float(abs(val)) * 10.0 ** (-ctx.dps + 8)


def _conj(z, ctx):
    if ctx.is_hp:
        import gmpy2
        return gmpy2.mpc(z.real, -z.imag)
    return np.conj(z)


def _validate(a, w, lam):
    if float(lam) <= 0:
        raise InvalidArgumentError(f"need lam > 0, got {lam}")
    if float(a) < 0:
        raise InvalidArgumentError(f"need a >= 0, got {a}")
    sigma = complex(w).real
    if float(a) == 0.0:
        if sigma <= 1.0:
            raise DomainError(f"a = 0 needs Re(w) > 1, got {w}")
    elif sigma <= 0.0:
        raise DomainError(f"need Re(w) > 0, got {w}")


def cosine_power_tail(a, w, lam, ctx=FLOAT64):
    """C(a, w) = int_lam^inf t^{-w} cos(a t) dt with an error estimate.

    Returns (value, err).  Domain: Re(w) > 0 for a > 0; Re(w) > 1 for a = 0.
    """
    _validate(a, w, lam)
    ctx.activate()
    if float(a) == 0.0:
        w_c = w if ctx.is_complex(w) else ctx.comp(w)
        lam_r = ctx.real(lam)
        val = ctx.exp((1 - w_c) * ctx.log(lam_r)) / (w_c - 1)
        return val, float(abs(val)) * (1e-15 if not ctx.is_hp else float(ctx.eps) * 8)
    imw = abs(complex(ctx.to_complex(w) if ctx.is_hp else w).imag)
    if imw <= _IMW_ROTATION_MAX:
        if ctx.is_hp:
            return _cosine_power_tail_rotation_hp(a, w, lam, ctx)
        return _cosine_power_tail_rotation_f(float(a), complex(w), float(lam))
    # split route: kappa(w) a^{w-1} - G(a, 1-w)
    w_c = w if ctx.is_complex(w) else ctx.comp(w)
    one = ctx.comp(1)
    val = kappa_factor(w_c, ctx) * ctx.power(ctx.real(a), w_c - one) \
        - cos_moment(a, one - w_c, lam, ctx)
    aL = float(a) * float(lam)
    eps = float(ctx.eps) if ctx.is_hp else 2.2e-16
    noise = eps * math.exp(min(aL, 700.0)) / max(1.0, math.sqrt(2 * math.pi * aL)) \
        * float(lam) ** (1.0 - complex(ctx.to_complex(w_c)).real)
    return val, noise + eps * float(abs(val)) * 8


def cosine_power_tail_many(a, w, lam, ctx=FLOAT64):
    """C(a_i, w) over an array of frequencies (float64 fast path, hp loop).

    a entries must be > 0.  Returns (values, errs).
    """
    if ctx.is_hp:
        vals, errs = [], []
        for ai in a:
            v, e = cosine_power_tail(ai, w, lam, ctx)
            vals.append(v)
            errs.append(e)
        return vals, errs
    a = np.asarray(a, dtype=float)
    w = complex(w)
    _validate(float(np.min(a)) if a.size else 1.0, w, lam)
    if abs(w.imag) <= _IMW_ROTATION_MAX:
        vals = np.empty(a.shape, dtype=complex)
        errs = np.empty(a.shape, dtype=float)
        for i, ai in enumerate(a):
            vals[i], errs[i] = _cosine_power_tail_rotation_f(float(ai), w, float(lam))
        return vals, errs
    kap = complex(kappa_factor(w))
    vals = kap * np.exp((w - 1) * np.log(a)) - _cos_moment_many_f(a, 1 - w, float(lam))
    aL = a * float(lam)
    noise = 2.2e-16 * np.exp(np.minimum(aL, 700.0)) / np.maximum(1.0, np.sqrt(2 * math.pi * np.maximum(aL, 1e-10))) \
        * float(lam) ** (1.0 - w.real)
    return vals, noise + 2.2e-16 * np.abs(vals) * 8
