"""Distinguished solutions psi_+/-, the two remarkable distributions built
from them, their completed Mellin transforms, and the structure functions
E(w), A(w), B(w) with two independent evaluation routes.

Route "theorem8": E from the completed Mellin transform of the combined
distribution (tail integrals of psi_+ - psi_-).  Route "theorem9": E from
sqrt(lam) times the jump of the completed evaluator at t = lam.  The two
share no linear algebra beyond the kernel matrices and cross-validate each
other at the 1e-6 level.

Singular-moment handling: the Mellin tail of a transform piece F_+(u 1_in)
is evaluated through the split

  int_lam^inf F_+(u~)(t) t^{-s} dt
    = 2 kappa(s) (2 pi)^{s-1} int_0^lam u~(y) y^{s-1} dy
      - 2 sum_j w_j u_j G(2 pi y_j, 1 - s)

with the singular moment summed exactly from u~'s closed cosine/atom
decomposition.  Near the (cancelling) poles at integer s the whole
evaluation is replaced by a 4-point cross average in s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .context import FLOAT64
from .corpus import CosAtom
from .engine import Workspace
from .errors import DomainError, InvalidArgumentError, SingularInputError
from .gammafn import gamma_completion
from .kernels import InnerFunction, cosine_transform_of_inner
from .projection import OuterFunction, SonineFunction, evaluator
from .tails import _cos_moment_many_f, cos_moment, kappa_factor

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# psi pair
# ---------------------------------------------------------------------------

@dataclass
class PsiPair:
    """Inner solutions u_pm of (1 +- F_lambda) u = 2 cos(2 pi lam y) and the
    entire extensions psi_pm(x) = 2 cos(2 pi lam x) -+ F_+(u_pm)(x)."""

    ws: Workspace
    u_plus: InnerFunction
    u_minus: InnerFunction
    res_plus: float
    res_minus: float

    @property
    def lam(self):
        return self.ws.lam

    def psi(self, sign: int, x):
        """psi_+ (sign=+1) or psi_- (sign=-1) at x (scalar or array)."""
        ws, ctx = self.ws, self.ws.ctx
        u = self.u_plus if sign > 0 else self.u_minus
        if ctx.is_hp:
            xr = ctx.real(x)
            base = 2 * ctx.cos(2 * ctx.pi * ctx.real(ws.lam) * xr)
            cti = cosine_transform_of_inner(u, xr)
            return base - cti if sign > 0 else base + cti
        x = np.asarray(x, dtype=float)
        base = 2.0 * np.cos(TWO_PI * ws.lam * x)
        cti = cosine_transform_of_inner(u, x)
        return base - cti if sign > 0 else base + cti


def compute_psi(ws: Workspace) -> PsiPair:
    ctx = ws.ctx
    if ctx.is_hp:
        g = [2 * ctx.cos(2 * ctx.pi * ctx.real(ws.lam) * y) for y in ws.rule.nodes]
    else:
        g = 2.0 * np.cos(TWO_PI * ws.lam * ws.nodes_f())
    u_p = ws.solve_pm(+1, g)
    u_m = ws.solve_pm(-1, g)

    def resid(u, sign):
        Fu = ws.apply_F(u.values)
        if ctx.is_hp:
            # the residual must be formed at working precision: the solution
            # components are huge when the spectrum crowds 1
            return max(float(abs(uv + sign * fv - gv))
                       for uv, fv, gv in zip(u.values, Fu, g))
        return float(np.max(np.abs(np.asarray(u.values) + sign * np.asarray(Fu)
                                   - np.asarray(g))))

    freq = 2 * ctx.pi * ctx.real(ws.lam) if ctx.is_hp else TWO_PI * ws.lam
    atoms = [(1.0, CosAtom(2.0, freq))]
    for u, sign in ((u_p, +1), (u_m, -1)):
        if ctx.is_hp:
            coeffs = [-ctx.real(sign) * 2 * w * v for w, v in zip(ws.rule.weights, u.values)]
            freqs = [2 * ctx.pi * y for y in ws.rule.nodes]
            u.ext_cos = (coeffs, freqs)
        else:
            u.ext_cos = (-sign * 2.0 * ws.rule.weights * np.asarray(u.values),
                         TWO_PI * ws.nodes_f())
        u.ext_atoms = atoms
    return PsiPair(ws, u_p, u_m, resid(u_p, +1), resid(u_m, -1))


_PSI_CACHE: dict = {}


def psi_for(ws: Workspace) -> PsiPair:
    key = id(ws)
    if key not in _PSI_CACHE:
        _PSI_CACHE[key] = compute_psi(ws)
    return _PSI_CACHE[key]


# ---------------------------------------------------------------------------
# the two distinguished distributions
# ---------------------------------------------------------------------------

@dataclass
class SonineDistribution:
    """Point mass at lam plus an evaluable tail on (lam, inf).

    parity +1: invariant under the cosine transform (tail psi_+);
    parity -1: anti-invariant (tail -psi_-).
    """

    point_mass: float
    tail: OuterFunction
    parity_sign: int
    label: str

    def tail_value(self, t, ws: Workspace):
        return self.tail.value(t, ws)


def build_distributions(pair: PsiPair):
    lam = pair.ws.lam
    ctx = pair.ws.ctx
    freq = 2 * ctx.pi * ctx.real(lam) if ctx.is_hp else TWO_PI * lam
    a_tail = OuterFunction(lam, [(1.0, CosAtom(2.0, freq))], pair.u_plus)
    mb_tail = OuterFunction(lam, [(1.0, CosAtom(-2.0, freq))], pair.u_minus)
    return (SonineDistribution(1.0, a_tail, +1, "A"),
            SonineDistribution(1.0, mb_tail, -1, "minus_iB"))


def pair_distribution(dist: SonineDistribution, f, ws: Workspace, abs_tol=1e-10):
    """<D, f> = point_mass f(lam) + int_lam^inf tail f dt (half-line pairing)."""
    from .projection import outer_pair
    ctx = ws.ctx
    flam = f.value(ws.lam, ctx)
    flam = ctx.to_complex(flam) if ctx.is_hp else complex(flam)

    def fv(t):
        if ctx.is_hp:
            return np.array([ctx.to_complex(f.value(ctx.real(float(tt)), ctx)) for tt in t])
        return f.value(t, ctx)

    v, tail_bound, T = outer_pair(dist.tail, fv, ws, abs_tol=abs_tol)
    return dist.point_mass * flam + v, tail_bound


# ---------------------------------------------------------------------------
# completed Mellin transforms
# ---------------------------------------------------------------------------

def _near_pole(s: complex) -> bool:
    if abs(s.imag) > 0.02:
        return False
    m = round(s.real)
    return m >= 1 and abs(s - m) < 0.02


def _cross_average(fn, s: complex, delta: float):
    vals = [fn(s + delta), fn(s - delta), fn(s + 1j * delta), fn(s - 1j * delta)]
    out = sum(v[0] for v in vals) / 4.0
    err = sum(v[1] for v in vals) / 4.0 + max(
        abs(vals[0][0] + vals[1][0] - vals[2][0] - vals[3][0]), 0.0) / 2.0
    return out, err


def mellin_transform_tail(u: InnerFunction, s, ws: Workspace):
    """int_lam^inf F_+(u~ 1_in)(t) t^{-s} dt via the singular split.

    Requires the inner function's extension (atoms with inner moments plus a
    cosine polynomial).  Returns (value as float complex, err).
    """
    if not u.has_extension():
        raise InvalidArgumentError("mellin_transform_tail needs the inner extension")
    ctx = ws.ctx
    ctx.activate()
    lam = ws.lam
    if ctx.is_hp:
        # frequencies must stay at working precision: they multiply inner
        # coefficients that can exceed 1e10 when the spectrum crowds 1
        s_c = ctx.comp(s)
        twopi = 2 * ctx.pi
        ising = ctx.comp(0)
        for coef, atom in u.ext_atoms:
            ising = ising + ctx.comp(coef) * atom.inner_moment(s_c, lam, ctx)
        if u.ext_cos is not None:
            coeffs, freqs = u.ext_cos
            for c, a in zip(coeffs, freqs):
                ising = ising + c * cos_moment(a, s_c, lam, ctx)
        jsum = ctx.comp(0)
        one = ctx.comp(1)
        for w, uv, y in zip(ws.rule.weights, u.values, ws.rule.nodes):
            jsum = jsum + w * uv * cos_moment(twopi * y, one - s_c, lam, ctx)
        pref = 2 * kappa_factor(s_c, ctx) * ctx.exp((s_c - 1) * ctx.log(2 * ctx.pi))
        val = pref * ising - 2 * jsum
        return val, float(abs(val)) * 10.0 ** (-(ctx.dps - 10)) + 10.0 ** (-(ctx.dps - 14))
    s_c = complex(s)
    ising = 0.0 + 0.0j
    for coef, atom in u.ext_atoms:
        ising += coef * complex(atom.inner_moment(s_c, lam, ctx))
    if u.ext_cos is not None:
        coeffs, freqs = u.ext_cos
        ising += np.dot(np.asarray(coeffs, dtype=complex),
                        _cos_moment_many_f(np.asarray(freqs), s_c, lam))
    uvals = u.values_complex()
    jvec = _cos_moment_many_f(TWO_PI * ws.nodes_f(), 1.0 - s_c, lam)
    jsum = np.dot(ws.weights_f() * uvals, jvec)
    pref = 2.0 * complex(kappa_factor(s_c)) * np.exp((s_c - 1) * math.log(TWO_PI))
    val = pref * ising - 2.0 * jsum
    aL = TWO_PI * lam * lam
    usum = float(np.sum(np.abs(ws.weights_f() * uvals)))
    noise = 2.2e-16 * (abs(pref) * abs(complex(ising)) + 2.0 * usum + abs(val))
    cancel = 2.2e-16 * math.exp(min(aL, 300.0)) / max(1.0, math.sqrt(aL)) \
        * usum * lam ** (1 - s_c.real)
    return val, noise + cancel


def completed_mellin(dist: SonineDistribution, w, ws: Workspace):
    """pi^{-w/2} Gamma(w/2) (sqrt(lam)/2) [pm lam^{-w} + int_lam^inf tail t^{-w}]."""
    w_c = complex(w)
    if w_c.real <= 0.0:
        raise DomainError(f"completed Mellin needs Re(w) > 0, got {w}")
    if _near_pole(w_c):
        delta = 1e-3 if not ws.ctx.is_hp else 10.0 ** (-max(6, ws.ctx.dps // 4))
        return _cross_average(lambda s: _completed_mellin_at(dist, s, ws), w_c, delta)
    return _completed_mellin_at(dist, w_c, ws)


def _completed_mellin_at(dist: SonineDistribution, w_c: complex, ws: Workspace):
    ctx = ws.ctx
    ctx.activate()
    lam = ws.lam
    err = 0.0
    if ctx.is_hp:
        s = ctx.comp(w_c)
        bracket = ctx.comp(dist.point_mass) * ctx.exp(-s * ctx.log(ctx.real(lam)))
        for coef, atom in dist.tail.atoms:
            v, e = atom.mellin_tail(s, lam, ctx)
            bracket = bracket + ctx.comp(coef) * v
            err += abs(coef) * e
        if dist.tail.u is not None:
            v, e = mellin_transform_tail(dist.tail.u, s, ws)
            bracket = bracket - v
            err += e
        pref = gamma_completion(s, ctx) * ctx.sqrt(ctx.real(lam)) / 2
        out = pref * bracket
        return complex(ctx.to_complex(out)), err * float(abs(pref))
    bracket = dist.point_mass * np.exp(-w_c * math.log(lam))
    for coef, atom in dist.tail.atoms:
        v, e = atom.mellin_tail(w_c, lam, ctx)
        bracket = bracket + coef * complex(v)
        err += abs(coef) * float(e)
    if dist.tail.u is not None:
        v, e = mellin_transform_tail(dist.tail.u, w_c, ws)
        bracket = bracket - v
        err += e
    pref = complex(gamma_completion(w_c)) * math.sqrt(lam) / 2.0
    return pref * bracket, err * abs(pref)


def completed_mellin_sonine(g: SonineFunction, w, ws: Workspace):
    """pi^{-w/2} Gamma(w/2) int_lam^inf g(t) t^{-w} dt for a Sonine function."""
    w_c = complex(w)
    if w_c.real <= 0.0:
        raise DomainError(f"completed Mellin needs Re(w) > 0, got {w}")

    def at(s):
        ctx = ws.ctx
        err = 0.0
        if ctx.is_hp:
            s_h = ctx.comp(s)
            bracket = ctx.comp(0)
            for coef, atom in g.outer.atoms:
                v, e = atom.mellin_tail(s_h, ws.lam, ctx)
                bracket = bracket + ctx.comp(coef) * v
                err += abs(coef) * e
            if g.outer.u is not None:
                v, e = mellin_transform_tail(g.outer.u, s_h, ws)
                bracket = bracket - v
                err += e
            pref = gamma_completion(s_h, ctx)
            return complex(ctx.to_complex(pref * bracket)), err * float(abs(pref))
        bracket = 0.0 + 0.0j
        for coef, atom in g.outer.atoms:
            v, e = atom.mellin_tail(s, ws.lam, ctx)
            bracket += coef * complex(v)
            err += abs(coef) * float(e)
        if g.outer.u is not None:
            v, e = mellin_transform_tail(g.outer.u, s, ws)
            bracket -= v
            err += e
        pref = complex(gamma_completion(s))
        return pref * bracket, err * abs(pref)

    if _near_pole(w_c):
        delta = 1e-3 if not ws.ctx.is_hp else 10.0 ** (-max(6, ws.ctx.dps // 4))
        return _cross_average(at, w_c, delta)
    return at(w_c)


# ---------------------------------------------------------------------------
# structure functions
# ---------------------------------------------------------------------------

@dataclass
class StructureEvaluation:
    w: complex
    E: complex
    A: complex
    B: complex
    method: str
    err: float

    def as_record(self) -> dict:
        return {
            "w_re": self.w.real, "w_im": self.w.imag,
            "E_re": self.E.real, "E_im": self.E.imag,
            "A_re": self.A.real, "A_im": self.A.imag,
            "B_re": self.B.real, "B_im": self.B.imag,
            "method": self.method, "err": self.err,
        }


def structure_ab(w, ws: Workspace):
    """(A(w), -iB(w)) as completed Mellin transforms of the two distributions."""
    pair = psi_for(ws)
    dist_a, dist_mb = build_distributions(pair)
    A, eA = completed_mellin(dist_a, w, ws)
    MB, eMB = completed_mellin(dist_mb, w, ws)
    return A, MB, eA + eMB


def e_theorem8(w, ws: Workspace) -> StructureEvaluation:
    """E(w) from the Mellin tail of the combined distribution (Re w > 0)."""
    w_c = complex(w)
    if w_c.real <= 0.0:
        raise DomainError(f"theorem8 route needs Re(w) > 0, got {w}")
    A, MB, err = structure_ab(w_c, ws)
    return StructureEvaluation(w_c, A + MB, A, 1j * MB, "theorem8", err)


def e_value(w, ws: Workspace) -> complex:
    return e_theorem8(w, ws).E


def e_at_reflected(w, ws: Workspace) -> complex:
    """E(1 - w) from values at w via the symmetry of A and antisymmetry of B."""
    A, MB, _ = structure_ab(complex(w), ws)
    return A - MB


def e_theorem9(w, ws: Workspace) -> StructureEvaluation:
    """E(w) = sqrt(lam) Gamma-factor jump of the evaluator at t = lam (Re w > 1/2)."""
    w_c = complex(w)
    if w_c.real <= 0.5:
        raise DomainError(f"theorem9 route needs Re(w) > 1/2, got {w}")
    ctx = ws.ctx

    def at(s):
        ev = evaluator(s, ws)
        if ctx.is_hp:
            jump = ctx.to_complex(ev.jump)
        else:
            jump = complex(ev.jump)
        pref = complex(ctx.to_complex(gamma_completion(ctx.comp(s), ctx))) if ctx.is_hp \
            else complex(gamma_completion(s))
        val = math.sqrt(ws.lam) * pref * jump
        est = abs(val) * (3e-11 if not ctx.is_hp else 10.0 ** (-(ctx.dps - 14)))
        return val, est

    if _near_pole(w_c):
        delta = 1e-3 if not ctx.is_hp else 10.0 ** (-max(6, ctx.dps // 4))
        E, err = _cross_average(at, w_c, delta)
    else:
        E, err = at(w_c)
    A, MB, _ = structure_ab(w_c, ws)
    return StructureEvaluation(w_c, E, A, 1j * MB, "theorem9", err)


def kernel_K(z1, z2, ws: Workspace) -> dict:
    """Reproducing kernel via both printed formulas; returns the second with
    the discrepancy of the first as a numerical-consistency measure."""
    z1, z2 = complex(z1), complex(z2)
    den = z1 + z2 - 1.0
    if abs(den) < 1e-8:
        raise SingularInputError("z1 + z2 = 1 is not evaluated (no limit form)")

    def E_and_parts(z):
        A, MB, err = structure_ab(z, ws)
        return A, MB, err

    A1, M1, e1 = E_and_parts(z1)
    A2, M2, e2 = E_and_parts(z2)
    E1, E2 = A1 + M1, A2 + M2
    # E(1 - z) through the parity relations: the z <-> 1-z cross-validation
    # itself lives in the symmetry checks; here the discrepancy between the
    # two kernel formulas must bound floating-point algebra only
    E1r = A1 - M1
    E2r = A2 - M2
    eq1 = (E1 * E2 - E1r * E2r) / den
    eq2 = 2.0 * (M1 * A2 + A1 * M2) / den
    return {
        "K": eq2, "eq1": eq1, "eq2": eq2,
        "discrepancy": abs(eq1 - eq2),
        "err": (e1 + e2) / abs(den),
    }
