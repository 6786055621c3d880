"""Numeric contexts: fast float64 (numpy) and high precision (gmpy2).

Everything numerical in this package is parameterised by a context so the
same formulas run in double precision for well-conditioned truncation
parameters and in multiprecision where the prolate spectrum crowds 1 beyond
float64 resolution (gap 1-|mu_0| ~ 4 sqrt(pi c) e^{-2c}, c = 2 pi lambda^2).

gmpy2's precision is a thread-local setting; hp entry points call
``ctx.activate()`` before doing arithmetic.  Usage is sequential.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import gmpy2


class FloatContext:
    """Plain float64 arithmetic on python/numpy scalars."""

    is_hp = False
    dps = 16

    def __init__(self):
        self.eps = 2.220446049250313e-16
        self.pi = math.pi

    def activate(self):
        pass

    def real(self, x):
        return float(x)

    def comp(self, re, im=0.0):
        return complex(re, im)

    def to_float(self, x):
        return float(x)

    def to_complex(self, z):
        return complex(z)

    def exp(self, z):
        return cmath.exp(z) if isinstance(z, complex) else math.exp(z)

    def log(self, z):
        return cmath.log(z) if isinstance(z, complex) else math.log(z)

    def sqrt(self, x):
        return math.sqrt(x)

    def cos(self, z):
        return cmath.cos(z) if isinstance(z, complex) else math.cos(z)

    def sin(self, z):
        return cmath.sin(z) if isinstance(z, complex) else math.sin(z)

    def cosh(self, z):
        return cmath.cosh(z) if isinstance(z, complex) else math.cosh(z)

    def power(self, z, w):
        """Principal z**w via exp(w log z)."""
        if isinstance(z, complex) or isinstance(w, complex) or z < 0:
            return cmath.exp(complex(w) * cmath.log(complex(z)))
        return math.exp(float(w) * math.log(float(z)))

    def is_complex(self, z):
        return isinstance(z, complex)

    def abs(self, z):
        return abs(z)

    def __repr__(self):
        return "FloatContext()"


class HPContext:
    """gmpy2 mpfr/mpc arithmetic at a fixed decimal precision."""

    is_hp = True

    def __init__(self, dps: int):
        self.dps = int(dps)
        self.prec_bits = int(dps * 3.3219280948873626) + 16
        self.activate()
        self.eps = gmpy2.mpfr(2) ** (-self.prec_bits + 2)
        self.pi = gmpy2.const_pi()

    def activate(self):
        gmpy2.get_context().precision = self.prec_bits

    def real(self, x):
        if isinstance(x, gmpy2.mpc):
            raise TypeError(f"real() got a complex value {x}")
        return gmpy2.mpfr(x)

    def comp(self, re, im=0.0):
        if isinstance(re, gmpy2.mpc):
            return gmpy2.mpc(re)
        if isinstance(re, complex):
            return gmpy2.mpc(gmpy2.mpfr(re.real), gmpy2.mpfr(re.imag))
        return gmpy2.mpc(self.real(re), self.real(im))

    def to_float(self, x):
        return float(x)

    def to_complex(self, z):
        if isinstance(z, gmpy2.mpc):
            return complex(float(z.real), float(z.imag))
        return complex(float(z))

    def exp(self, z):
        return gmpy2.exp(z)

    def log(self, z):
        return gmpy2.log(z)

    def sqrt(self, x):
        return gmpy2.sqrt(x)

    def cos(self, z):
        return gmpy2.cos(z)

    def sin(self, z):
        return gmpy2.sin(z)

    def cosh(self, z):
        return gmpy2.cosh(z)

    def power(self, z, w):
        return gmpy2.exp(w * gmpy2.log(z)) if isinstance(z, gmpy2.mpc) or isinstance(w, gmpy2.mpc) \
            else gmpy2.exp(self.real(w) * gmpy2.log(self.real(z)))

    def is_complex(self, z):
        return isinstance(z, gmpy2.mpc)

    def abs(self, z):
        return abs(z)

    def __repr__(self):
        return f"HPContext(dps={self.dps})"


FLOAT64 = FloatContext()


@lru_cache(maxsize=None)
def hp_context(dps: int) -> HPContext:
    return HPContext(dps)


def spectral_gap_estimate(lam: float) -> float:
    """Estimated 1 - mu_0 of the truncated cosine operator.

    Uses the classical asymptotic 1 - nu_0 ~ 4 sqrt(pi c) e^{-2c} for the
    top sinc-kernel eigenvalue (c = 2 pi lambda^2), halved for mu = sqrt(nu).
    Only an order-of-magnitude guide for lane selection.
    """
    c = 2.0 * math.pi * lam * lam
    if 2.0 * c > 700.0:
        return 0.0
    return min(1.0, 2.0 * math.sqrt(math.pi * c) * math.exp(-2.0 * c))


def context_for(lam: float, precision: str = "auto"):
    """Pick the numeric context for truncation parameter lam.

    precision: "auto", "float64", or "hp[:dps]".
    """
    if precision == "float64":
        return FLOAT64
    if precision.startswith("hp"):
        if ":" in precision:
            return hp_context(int(precision.split(":")[1]))
        return hp_context(_auto_dps(lam))
    if precision != "auto":
        raise ValueError(f"unknown precision spec {precision!r}")
    gap = spectral_gap_estimate(lam)
    if gap > 1e-9:
        return FLOAT64
    return hp_context(_auto_dps(lam))


def _auto_dps(lam: float) -> int:
    c = 2.0 * math.pi * lam * lam
    # resolve the spectral gap (0.87 c digits) plus headroom for series
    # cancellation (0.44 c digits, not additive but cheap) and targets
    return max(40, int(0.87 * c) + 32)
