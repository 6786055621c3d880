"""Complex log-Gamma via recursion shift + Stirling series, and the
half-Gamma completion factor pi^{-w/2} Gamma(w/2)."""

from __future__ import annotations

import math

from .context import FLOAT64
from .errors import PoleError

# exact Bernoulli numbers B_2 .. B_30 as (numerator, denominator)
_BERNOULLI = [
    (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6),
    (-3617, 510), (43867, 798), (-174611, 330), (854513, 138),
    (-236364091, 2730), (8553103, 6), (-23749461029, 870),
    (8615841276005, 14322),
]

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_terms(ctx, nterms):
    # B_{2k} / (2k (2k-1)) as ctx reals
    out = []
    for k in range(1, nterms + 1):
        num, den = _BERNOULLI[k - 1]
        out.append(ctx.real(num) / (ctx.real(den) * (2 * k) * (2 * k - 1)))
    return out


def _config(ctx):
    if not ctx.is_hp:
        return 7, 10.0  # series through B_14, shift to |z| >= 10
    nterms = 15
    shift = 10.0 ** ((ctx.dps + 2 + 7.2) / 31.0)
    return nterms, max(10.0, shift)


def log_gamma(z, ctx=FLOAT64):
    """log Gamma(z), principal branch for Re(z) >= 1/2.

    Recursion into |z| >= R, then the Stirling asymptotic series with exact
    Bernoulli coefficients; reflection for Re(z) < 1/2.  exp(log_gamma(z))
    is accurate to ~1e-13 relative in float64 for |z| <= 100 (reflected
    values may differ from the principal branch by a multiple of 2 pi i).
    """
    ctx.activate()
    z = z if ctx.is_complex(z) else ctx.comp(z)
    zre, zim = _parts(z, ctx)
    if zim == 0 and float(zre) <= 0 and float(zre) == int(float(zre)):
        raise PoleError(f"log_gamma pole at z = {ctx.to_complex(z)}")
    nterms, shift = _config(ctx)
    if float(zre) < 0.5:
        # reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z)
        pi = ctx.pi
        return ctx.log(ctx.comp(pi)) - ctx.log(ctx.sin(ctx.comp(pi) * z)) \
            - log_gamma(ctx.comp(1) - z, ctx)
    # shift z up by recursion until |z| >= shift
    acc = ctx.comp(0)
    m = 0
    while _hypot(z, ctx) < shift:
        acc = acc + ctx.log(z)
        z = z + 1
        m += 1
        if m > 4096:
            raise RuntimeError("log_gamma shift did not terminate")
    terms = _stirling_terms(ctx, nterms)
    zinv2 = 1 / (z * z)
    s = ctx.comp(0)
    p = 1 / z
    for a in terms:
        s = s + a * p
        p = p * zinv2
    half = ctx.real(1) / 2
    hl2pi = ctx.real(_HALF_LOG_TWO_PI) if not ctx.is_hp else ctx.log(2 * ctx.pi) * half
    out = (z - half) * ctx.log(z) - z + hl2pi + s
    return out - acc


def gamma_completion(w, ctx=FLOAT64):
    """pi^{-w/2} Gamma(w/2)."""
    ctx.activate()
    w = w if ctx.is_complex(w) else ctx.comp(w)
    half = ctx.real(1) / 2
    return ctx.exp(log_gamma(w * half, ctx) - w * half * ctx.log(ctx.comp(ctx.pi)))


def _parts(z, ctx):
    if ctx.is_hp:
        return z.real, z.imag
    return z.real, z.imag


def _hypot(z, ctx):
    return float(abs(z))
