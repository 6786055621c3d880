"""Closed-form even test functions and the "atom" pieces outer functions are
built from.

Every atom can evaluate itself; where the machinery needs them it also
provides its Fourier (cosine) transform in closed form, its Mellin tail
int_lam^inf value(t) t^{-s} dt, and its singular inner moment
int_0^lam value(y) y^{s-1} dy (the ingredient that keeps the completed
Mellin transforms spectrally accurate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .context import FLOAT64
from .errors import ContractError, InvalidArgumentError
from .kernels import DecayBound, gaussian_decay
from .quadrature import panel_rule
from .tails import cos_moment, cosine_power_tail

TWO_PI = 2.0 * math.pi


def _eval_amp(expr, ctx):
    kind = expr[0]
    if kind == "lit":
        return ctx.real(expr[1])
    if kind == "rpow":
        return ctx.power(ctx.real(expr[1]), ctx.real(expr[2]))
    if kind == "exp_pi":
        return ctx.exp(ctx.real(expr[1]) * ctx.pi)
    if kind == "mul":
        return _eval_amp(expr[1], ctx) * _eval_amp(expr[2], ctx)
    raise ValueError(f"unknown amplitude expression {expr!r}")


def _lower_gamma_series(sig, x, ctx, max_terms=500):
    """gamma(sig, x) = x^sig e^-x sum_n x^n / (sig (sig+1) ... (sig+n)), x >= 0."""
    ctx.activate()
    sig = sig if ctx.is_complex(sig) else ctx.comp(sig)
    x = ctx.real(x)
    pref = ctx.exp(sig * ctx.log(x) - x)
    den = sig
    term = 1 / den
    tot = term
    tol = float(ctx.eps) if ctx.is_hp else 1e-19
    for n in range(1, max_terms):
        den = sig + n
        term = term * x / den
        tot = tot + term
        if float(abs(term)) < tol * max(1.0, float(abs(tot))):
            break
    return pref * tot


@dataclass(frozen=True)
class CosAtom:
    """amp * cos(freq * t); appears in distribution tails only."""

    amp: float
    freq: float

    def value(self, t, ctx=FLOAT64):
        if ctx.is_hp:
            return ctx.comp(self.amp) * ctx.cos(ctx.real(self.freq) * ctx.real(t))
        return self.amp * np.cos(self.freq * np.asarray(t, dtype=float))

    def mellin_tail(self, s, lam, ctx=FLOAT64):
        v, e = cosine_power_tail(self.freq, s, lam, ctx)
        return self.amp * v, abs(self.amp) * e

    def inner_moment(self, s, lam, ctx=FLOAT64):
        return self.amp * cos_moment(self.freq, s, lam, ctx)

    def decay_bound(self):
        return None  # bounded, not decaying


@dataclass(frozen=True)
class GaussAtom:
    """amp * e^{-alpha pi t^2} * mod(2 pi b t), mod = cos or cosh.

    amp_expr, when set, re-derives the amplitude at working precision so
    closed-form transform identities hold beyond float64 (("rpow", x, p) for
    x**p, ("exp_pi", c) for e^{c pi}, ("mul", e1, e2) for products).
    """

    amp: float
    alpha: float
    b: float = 0.0
    kind: str = "cos"
    amp_expr: tuple | None = None

    def amp_at(self, ctx):
        if not ctx.is_hp or self.amp_expr is None:
            return self.amp if not ctx.is_hp else ctx.real(self.amp)
        return _eval_amp(self.amp_expr, ctx)

    def value(self, t, ctx=FLOAT64):
        if ctx.is_hp:
            tr = ctx.real(t)
            v = self.amp_at(ctx) * ctx.exp(-ctx.real(self.alpha) * ctx.pi * tr * tr)
            if self.b != 0.0:
                arg = 2 * ctx.pi * ctx.real(self.b) * tr
                v = v * (ctx.cos(arg) if self.kind == "cos" else ctx.cosh(arg))
            return v
        t = np.asarray(t, dtype=float)
        v = self.amp * np.exp(-self.alpha * math.pi * t * t)
        if self.b != 0.0:
            arg = TWO_PI * self.b * t
            v = v * (np.cos(arg) if self.kind == "cos" else np.cosh(arg))
        return v

    def transform_atoms(self):
        a, b = self.alpha, self.b
        base = self.amp_expr if self.amp_expr is not None else ("lit", self.amp)
        if b == 0.0:
            expr = ("mul", base, ("rpow", a, -0.5))
            return [GaussAtom(self.amp / math.sqrt(a), 1.0 / a, amp_expr=expr)]
        if self.kind == "cos":
            amp = self.amp * math.exp(-math.pi * b * b / a) / math.sqrt(a)
            expr = ("mul", base, ("mul", ("exp_pi", -b * b / a), ("rpow", a, -0.5)))
            return [GaussAtom(amp, 1.0 / a, b / a, "cosh", amp_expr=expr)]
        amp = self.amp * math.exp(math.pi * b * b / a) / math.sqrt(a)
        expr = ("mul", base, ("mul", ("exp_pi", b * b / a), ("rpow", a, -0.5)))
        return [GaussAtom(amp, 1.0 / a, b / a, "cos", amp_expr=expr)]

    def decay_bound(self):
        shift = self.b / self.alpha if self.kind == "cosh" else 0.0
        amp = abs(self.amp) * (math.exp(math.pi * self.b * self.b / self.alpha)
                               if self.kind == "cosh" else 1.0)
        return gaussian_decay(amp, self.alpha, shift)

    def _upper_t(self, sigma, ctx):
        digits = (ctx.dps + 6) * math.log(10.0)
        shift = abs(self.b) / self.alpha if self.kind == "cosh" else 0.0
        return math.sqrt(digits / (self.alpha * math.pi)) + shift + 1.0

    def mellin_tail(self, s, lam, ctx=FLOAT64):
        """int_lam^inf value(t) t^{-s} dt by panel quadrature."""
        sig = complex(ctx.to_complex(s) if ctx.is_hp else s)
        T = max(self._upper_t(sig.real, ctx), float(lam) * 1.5)
        freq = abs(self.b) + abs(sig.imag) / (TWO_PI * float(lam))
        width = min(0.35 * max(float(lam), 1.0), 0.5 / (freq + 0.5))
        n_pan = max(6, int(math.ceil((T - float(lam)) / width)))
        edges = [float(lam) + (T - float(lam)) * k / n_pan for k in range(n_pan + 1)]
        if not ctx.is_hp:
            nodes, weights = panel_rule(edges, 20, ctx)
            fv = self.value(nodes, ctx) * np.exp(-complex(sig) * np.log(nodes))
            val = np.dot(weights, fv)
            nodes2, weights2 = panel_rule(edges, 12, ctx)
            fv2 = self.value(nodes2, ctx) * np.exp(-complex(sig) * np.log(nodes2))
            err = abs(val - np.dot(weights2, fv2))
            return val, err + 1e-18 * abs(self.amp)
        ctx.activate()
        nodes, weights = panel_rule(edges, 28, ctx)
        s_c = s if ctx.is_complex(s) else ctx.comp(s)
        tot = ctx.comp(0)
        for t, wgt in zip(nodes, weights):
            tot = tot + wgt * self.value(t, ctx) * ctx.exp(-s_c * ctx.log(t))
        return tot, 10.0 ** (-(ctx.dps - 6))

    def inner_moment(self, s, lam, ctx=FLOAT64):
        """int_0^lam value(y) y^{s-1} dy; closed gamma-series for b = 0."""
        if self.b != 0.0:
            raise NotImplementedError("inner moment only for unmodulated Gaussians")
        ctx.activate()
        s_c = s if ctx.is_complex(s) else ctx.comp(s)
        ap = ctx.real(self.alpha) * ctx.pi
        x = ap * ctx.real(lam) * ctx.real(lam)
        half = ctx.real(1) / 2
        amp = self.amp_at(ctx) if ctx.is_hp else self.amp
        return ctx.comp(amp) * half * ctx.exp(-s_c * half * ctx.log(ap)) \
            * _lower_gamma_series(s_c * half, x, ctx)


@dataclass(frozen=True)
class PolyGaussAtom:
    """amp * (c0 + c1 t^2) e^{-pi t^2} (alpha = 1 Hermite-type)."""

    amp: float
    c0: float
    c1: float

    def value(self, t, ctx=FLOAT64):
        if ctx.is_hp:
            tr = ctx.real(t)
            return ctx.real(self.amp) * (ctx.real(self.c0) + ctx.real(self.c1) * tr * tr) \
                * ctx.exp(-ctx.pi * tr * tr)
        t = np.asarray(t, dtype=float)
        return self.amp * (self.c0 + self.c1 * t * t) * np.exp(-math.pi * t * t)

    def transform_atoms(self):
        # F_+[(c0 + c1 t^2) e^{-pi t^2}] = ((c0 + c1/(2 pi)) - c1 x^2) e^{-pi x^2}
        return [PolyGaussAtom(self.amp, self.c0 + self.c1 / TWO_PI, -self.c1)]

    def decay_bound(self):
        amp = abs(self.amp) * (abs(self.c0) + abs(self.c1))
        return DecayBound(
            lambda t: amp * (1.0 + np.asarray(t, dtype=float) ** 2) * np.exp(-math.pi * np.asarray(t, dtype=float) ** 2),
            lambda T: amp * (1.0 + T * T) * math.exp(-math.pi * T * T) / (math.pi * T),
            0.0,
        )

    def mellin_tail(self, s, lam, ctx=FLOAT64):
        g = GaussAtom(self.amp, 1.0)
        v0, e0 = _poly_mellin(self, s, lam, ctx)
        return v0, e0

    def inner_moment(self, s, lam, ctx=FLOAT64):
        base = GaussAtom(self.amp, 1.0)
        m0 = base.inner_moment(s, lam, ctx)
        two = 2 if not ctx.is_hp else ctx.real(2)
        m2 = base.inner_moment((s if ctx.is_complex(s) or not ctx.is_hp else ctx.comp(s)) + two, lam, ctx)
        return self.c0 * m0 + self.c1 * m2


def _poly_mellin(atom, s, lam, ctx):
    # reuse the Gaussian panel quadrature through atom.value
    helper = GaussAtom(1.0, 1.0)
    sig = complex(ctx.to_complex(s) if ctx.is_hp else s)
    T = helper._upper_t(sig.real, ctx) + 1.0
    freq = abs(sig.imag) / (TWO_PI * float(lam))
    width = min(0.35 * max(float(lam), 1.0), 0.5 / (freq + 0.5))
    n_pan = max(6, int(math.ceil((T - float(lam)) / width)))
    edges = [float(lam) + (T - float(lam)) * k / n_pan for k in range(n_pan + 1)]
    if not ctx.is_hp:
        nodes, weights = panel_rule(edges, 20, ctx)
        fv = atom.value(nodes, ctx) * np.exp(-complex(sig) * np.log(nodes))
        val = np.dot(weights, fv)
        nodes2, weights2 = panel_rule(edges, 12, ctx)
        fv2 = atom.value(nodes2, ctx) * np.exp(-complex(sig) * np.log(nodes2))
        return val, abs(val - np.dot(weights2, fv2)) + 1e-18
    ctx.activate()
    nodes, weights = panel_rule(edges, 28, ctx)
    s_c = s if ctx.is_complex(s) else ctx.comp(s)
    tot = ctx.comp(0)
    for t, wgt in zip(nodes, weights):
        tot = tot + wgt * atom.value(t, ctx) * ctx.exp(-s_c * ctx.log(t))
    return tot, 10.0 ** (-(ctx.dps - 6))


@dataclass(frozen=True)
class PowerTailAtom:
    """amp * t^{-expo}, used on (lam, inf) only."""

    amp: complex
    expo: complex

    def value(self, t, ctx=FLOAT64):
        if ctx.is_hp:
            e = self.expo if ctx.is_complex(self.expo) else ctx.comp(self.expo)
            return ctx.comp(self.amp) * ctx.exp(-e * ctx.log(ctx.real(t)))
        t = np.asarray(t, dtype=float)
        return self.amp * np.exp(-complex(self.expo) * np.log(t))

    def transform_outer(self, x, lam, ctx=FLOAT64):
        """F_+ of the (lam, inf)-restricted power: 2 amp C(2 pi x, expo)."""
        v, e = cosine_power_tail(TWO_PI * float(x), self.expo, lam, ctx) if np.ndim(x) == 0 else (None, None)
        if v is not None:
            return 2.0 * self.amp * v
        raise InvalidArgumentError("transform_outer expects scalar x")

    def mellin_tail(self, s, lam, ctx=FLOAT64):
        ctx.activate()
        e = self.expo if (ctx.is_hp and ctx.is_complex(self.expo)) else (
            ctx.comp(self.expo) if ctx.is_hp else complex(self.expo))
        s_c = s if ctx.is_complex(s) or not ctx.is_hp else ctx.comp(s)
        lam_r = ctx.real(lam) if ctx.is_hp else float(lam)
        den = s_c + e - 1
        val = ctx.comp(self.amp) * ctx.exp((1 - e - s_c) * ctx.log(lam_r)) / den if ctx.is_hp \
            else self.amp * np.exp((1 - e - s_c) * np.log(lam_r)) / den
        return val, float(abs(val)) * 1e-15

    def decay_bound(self):
        sig = complex(self.expo).real
        if sig <= 1.0:
            return None
        amp = abs(self.amp)
        return DecayBound(
            lambda t: amp * np.asarray(t, dtype=float) ** (-sig),
            lambda T: amp * T ** (1.0 - sig) / (sig - 1.0),
            0.0,
        )


@dataclass
class EvenL2Function:
    """Closed-form even square-integrable test function.

    atoms describe f on (0, inf); if inner_zero, f is the atom sum on
    (lam, inf) and 0 below.  transform atoms, when present, give F_+(f) in
    closed form (None means: compute transforms numerically).
    """

    name: str
    lam: float
    atoms: list
    transform_atoms: list | None = None
    inner_zero: bool = False
    self_reciprocal_sign: int | None = None
    params: dict = field(default_factory=dict)

    def value(self, t, ctx=FLOAT64):
        if ctx.is_hp:
            tr = ctx.real(t)
            if self.inner_zero and float(tr) < float(self.lam):
                return ctx.comp(0)
            tot = ctx.comp(0)
            for a in self.atoms:
                tot = tot + a.value(tr, ctx)
            return tot
        t = np.asarray(t, dtype=float)
        tot = np.zeros(t.shape, dtype=complex)
        for a in self.atoms:
            tot = tot + a.value(t, ctx)
        if self.inner_zero:
            tot = np.where(t > float(self.lam), tot, 0.0)
        return tot

    def transform_value(self, x, ctx=FLOAT64):
        if self.transform_atoms is None:
            raise ContractError(f"{self.name}: no closed-form transform")
        if ctx.is_hp:
            tot = ctx.comp(0)
            for a in self.transform_atoms:
                tot = tot + a.value(ctx.real(x), ctx)
            return tot
        x = np.asarray(x, dtype=float)
        tot = np.zeros(x.shape, dtype=complex)
        for a in self.transform_atoms:
            tot = tot + a.value(x, ctx)
        return tot

    def decay_bound(self):
        bounds = [a.decay_bound() for a in self.atoms]
        if any(b is None for b in bounds):
            return None
        return DecayBound(
            lambda t: sum(b.envelope(t) for b in bounds),
            lambda T: sum(b.tail_mass(T) for b in bounds),
            max(b.valid_from for b in bounds),
        )


def corpus_function(name: str, lam: float, **params) -> EvenL2Function:
    """Named members of the closed-form test corpus."""
    if name == "gaussian":
        alpha = float(params.get("alpha", 1.0))
        amp = float(params.get("amp", 1.0))
        base = GaussAtom(amp, alpha, amp_expr=("lit", amp))
        f = EvenL2Function(
            name, lam,
            atoms=[base],
            transform_atoms=base.transform_atoms(),
            self_reciprocal_sign=+1 if alpha == 1.0 else None,
            params={"alpha": alpha, "amp": amp})
        return f
    if name == "sr_gaussian":
        amp = 2.0 ** 0.25
        atom = GaussAtom(amp, 1.0, amp_expr=("rpow", 2.0, 0.25))
        return EvenL2Function(name, lam, [atom], [atom], self_reciprocal_sign=+1)
    if name == "cosmod":
        b = float(params.get("b", 1.0))
        base = GaussAtom(1.0, 1.0, b, "cos", amp_expr=("lit", 1.0))
        return EvenL2Function(
            name, lam,
            atoms=[base],
            transform_atoms=base.transform_atoms(),
            params={"b": b})
    if name == "hermite2":
        # (t^2 - 1/(4 pi)) e^{-pi t^2}: anti-invariant under the cosine transform
        atom = PolyGaussAtom(1.0, -1.0 / (4.0 * math.pi), 1.0)
        return EvenL2Function(name, lam, [atom],
                              [PolyGaussAtom(-1.0, -1.0 / (4.0 * math.pi), 1.0)],
                              self_reciprocal_sign=-1)
    if name == "tail_gauss":
        return EvenL2Function(name, lam, [GaussAtom(1.0, 1.0)], None, inner_zero=True)
    if name == "tail_power":
        expo = complex(params.get("expo", 0.75))
        return EvenL2Function(name, lam, [PowerTailAtom(1.0, expo)], None,
                              inner_zero=True, params={"expo": expo})
    if name == "zero":
        return EvenL2Function(name, lam, [], [], params={})
    raise InvalidArgumentError(f"unknown corpus function {name!r}")


CORPUS_FIVE = ("sr_gaussian", "gaussian2", "cosmod", "hermite2", "tail_gauss")


def corpus_by_tag(tag: str, lam: float) -> EvenL2Function:
    if tag == "gaussian2":
        return corpus_function("gaussian", lam, alpha=2.0)
    return corpus_function(tag, lam)
