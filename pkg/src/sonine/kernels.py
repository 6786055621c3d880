"""Truncated cosine-transform and folded Dirichlet kernels as Nystrom
matrices on (0, lam), plus evaluable cosine transforms.

Even functions live on the half line with norm int_0^inf |f|^2 dt; the
interval operators act on samples at the Gauss-Legendre nodes of (0, lam).
Matrices are stored in the symmetrised normalisation M_ij = K(x_i,x_j)
sqrt(w_i w_j) so that eigenproblems and solves are symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .context import FLOAT64
from .errors import ContractError, InvalidArgumentError
from .quadrature import QuadratureRule, panel_rule

TWO_PI = 2.0 * math.pi


@dataclass
class InnerFunction:
    """Samples of a function on the inner-interval quadrature nodes.

    ``ext_atoms``/``ext_cos`` describe the natural smooth extension of the
    sample vector off the grid (Nystrom interpolation): the function
    sum(coef * atom.value) + sum(c_k cos(a_k y)) restricts to the samples up
    to solver tolerance.  They power off-grid evaluation and the exact
    singular-moment machinery; plain sample vectors leave them empty.
    """

    rule: QuadratureRule
    values: object
    ext_atoms: list = field(default_factory=list)
    ext_cos: object = None  # (coeffs, freqs) arrays/lists

    @property
    def n(self):
        return len(self.values)

    def values_complex(self) -> np.ndarray:
        ctx = self.rule.ctx
        if ctx.is_hp:
            return np.array([ctx.to_complex(v) for v in self.values])
        return np.asarray(self.values, dtype=complex)

    def has_extension(self):
        return self.ext_cos is not None or bool(self.ext_atoms)

    def extension_value(self, x):
        """Evaluate the smooth extension at x (scalar or float array)."""
        ctx = self.rule.ctx
        if not self.has_extension():
            raise InvalidArgumentError("inner function carries no extension")
        if ctx.is_hp:
            tot = ctx.comp(0)
            for coef, atom in self.ext_atoms:
                tot = tot + ctx.comp(coef) * atom.value(x, ctx)
            if self.ext_cos is not None:
                coeffs, freqs = self.ext_cos
                xr = ctx.real(x)
                for c, a in zip(coeffs, freqs):
                    tot = tot + c * ctx.cos(a * xr)
            return tot
        x = np.asarray(x, dtype=float)
        tot = np.zeros(x.shape, dtype=complex)
        for coef, atom in self.ext_atoms:
            tot = tot + coef * atom.value(x, ctx)
        if self.ext_cos is not None:
            coeffs, freqs = self.ext_cos
            tot = tot + np.cos(np.outer(x, freqs)) @ np.asarray(coeffs)
        return tot


@dataclass(frozen=True)
class KernelMatrix:
    """Dense symmetric Nystrom matrix; kind is "F_lambda" or "D_lambda"."""

    kind: str
    rule: QuadratureRule
    entries: object

    @property
    def lam(self):
        return self.rule.b

    def entries_f(self) -> np.ndarray:
        if self.rule.ctx.is_hp:
            return np.array([[float(v) for v in row] for row in self.entries])
        return self.entries


def build_f_lambda(rule: QuadratureRule) -> KernelMatrix:
    """Truncated cosine-transform kernel 2 cos(2 pi x y) on (0, lam)."""
    ctx = rule.ctx
    if not ctx.is_hp:
        x = rule.nodes
        sw = np.sqrt(rule.weights)
        M = 2.0 * np.cos(TWO_PI * np.outer(x, x)) * np.outer(sw, sw)
        M = 0.5 * (M + M.T)
        return KernelMatrix("F_lambda", rule, M)
    ctx.activate()
    n = rule.n
    sw = [ctx.sqrt(wi) for wi in rule.weights]
    twopi = 2 * ctx.pi
    x = rule.nodes
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = 2 * ctx.cos(twopi * x[i] * x[j]) * sw[i] * sw[j]
            M[i][j] = v
            M[j][i] = v
    return KernelMatrix("F_lambda", rule, M)


def build_d_lambda(rule: QuadratureRule) -> KernelMatrix:
    """Folded Dirichlet kernel S(x-y) + S(x+y), S(u) = sin(2 pi lam u)/(pi u).

    This is the sine kernel of the full line restricted to even functions and
    expressed on (0, lam); the diagonal uses the removable limit S(0) = 2 lam.
    """
    ctx = rule.ctx
    lam = rule.b
    if not ctx.is_hp:
        x = rule.nodes
        sw = np.sqrt(rule.weights)

        def S(u):
            out = np.full_like(u, 2.0 * float(lam))
            m = np.abs(u) > 1e-15
            out[m] = np.sin(TWO_PI * float(lam) * u[m]) / (np.pi * u[m])
            return out

        M = (S(np.subtract.outer(x, x)) + S(np.add.outer(x, x))) * np.outer(sw, sw)
        M = 0.5 * (M + M.T)
        return KernelMatrix("D_lambda", rule, M)
    ctx.activate()
    n = rule.n
    sw = [ctx.sqrt(wi) for wi in rule.weights]
    twopil = 2 * ctx.pi * ctx.real(lam)

    def S1(u):
        if float(abs(u)) < 1e-30:
            return 2 * ctx.real(lam)
        return ctx.sin(twopil * u) / (ctx.pi * u)

    x = rule.nodes
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = (S1(x[i] - x[j]) + S1(x[i] + x[j])) * sw[i] * sw[j]
            M[i][j] = v
            M[j][i] = v
    return KernelMatrix("D_lambda", rule, M)


def cosine_transform_of_inner(u: InnerFunction, x):
    """F_+(u 1_(0,lam))(x) = 2 sum_j w_j cos(2 pi x y_j) u_j.

    Exact for the quadrature measure; entire in x.  x may be scalar or array
    (float context) or scalar/list (hp context).
    """
    ctx = u.rule.ctx
    if not ctx.is_hp:
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xv = np.atleast_1d(x)
        vals = np.asarray(u.values)
        out = 2.0 * (np.cos(TWO_PI * np.outer(xv, u.rule.nodes)) @ (u.rule.weights * vals))
        return out[0] if scalar else out
    ctx.activate()
    twopi = 2 * ctx.pi

    def one(xi):
        xr = ctx.real(xi)
        tot = None
        for yj, wj, uj in zip(u.rule.nodes, u.rule.weights, u.values):
            t = wj * ctx.cos(twopi * xr * yj) * uj
            tot = t if tot is None else tot + t
        return 2 * tot

    if isinstance(x, (list, tuple)):
        return [one(xi) for xi in x]
    return one(x)


@dataclass(frozen=True)
class DecayBound:
    """Envelope |f(t)| <= envelope(t) for t >= valid_from, with
    tail_mass(T) = int_T^inf envelope dt in closed form."""

    envelope: object
    tail_mass: object
    valid_from: float = 0.0


def gaussian_decay(amp: float, alpha: float, shift: float = 0.0) -> DecayBound:
    """|amp| e^{-alpha pi (t - shift)^2} style bound (shift covers cosh factors)."""
    amp = abs(amp)

    def env(t):
        return amp * np.exp(-alpha * math.pi * np.maximum(np.asarray(t, dtype=float) - shift, 0.0) ** 2)

    def tail(T):
        u = max(float(T) - shift, 1e-12)
        return amp * math.exp(-alpha * math.pi * u * u) / (2.0 * alpha * math.pi * u)

    return DecayBound(env, tail, valid_from=shift)


def pick_t_out(bound: DecayBound, tol: float, start: float = 1.0) -> float:
    T = max(start, bound.valid_from + 1.0)
    while 2.0 * bound.tail_mass(T) > tol:
        T *= 1.5
        if T > 1e8:
            raise ContractError("decay bound too weak to certify the tail")
    return T


def cosine_transform_numeric(f, x, t_out, bound: DecayBound, ctx=FLOAT64,
                             lower: float = 0.0, panel_k: int = 16):
    """2 int_lower^t_out cos(2 pi x t) f(t) dt with certified tail error.

    f is a callable on scalars/arrays of t.  Returns (values, err) where err
    includes the quadrature-refinement estimate and 2*tail_mass(t_out).
    """
    if bound is None:
        raise ContractError("cosine_transform_numeric requires a decay bound")
    t_out = float(t_out)
    if t_out <= lower:
        raise InvalidArgumentError("t_out must exceed the lower limit")
    if not ctx.is_hp:
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        xmax = float(np.max(np.abs(xs), initial=0.0))
        width = min(0.5 / (xmax + 0.25), (t_out - lower) / 4.0)
        n_pan = max(4, int(math.ceil((t_out - lower) / width)))
        edges = np.linspace(lower, t_out, n_pan + 1)
        nodes, weights = panel_rule(edges, panel_k, ctx)
        fv = f(nodes)
        cosmat = np.cos(TWO_PI * np.outer(xs, nodes))
        vals = 2.0 * cosmat @ (weights * fv)
        edges2 = np.linspace(lower, t_out, 2 * n_pan + 1)
        nodes2, weights2 = panel_rule(edges2, panel_k, ctx)
        vals2 = 2.0 * np.cos(TWO_PI * np.outer(xs, nodes2)) @ (weights2 * f(nodes2))
        err = np.abs(vals - vals2) + 2.0 * bound.tail_mass(t_out)
        if np.ndim(x) == 0:
            return vals[0], float(err[0])
        return vals, err
    ctx.activate()
    xs = x if isinstance(x, (list, tuple)) else [x]
    xmax = max(abs(float(v)) for v in xs)
    width = min(0.5 / (xmax + 0.25), (t_out - lower) / 4.0)
    n_pan = max(4, int(math.ceil((t_out - lower) / width)))
    edges = [lower + (t_out - lower) * k / n_pan for k in range(n_pan + 1)]
    nodes, weights = panel_rule(edges, max(panel_k, 20), ctx)
    fv = [f(t) for t in nodes]
    twopi = 2 * ctx.pi
    out = []
    for xi in xs:
        xr = ctx.real(xi)
        tot = ctx.comp(0)
        for t, wt, fval in zip(nodes, weights, fv):
            tot = tot + wt * ctx.cos(twopi * xr * t) * fval
        out.append(2 * tot)
    err = [2.0 * bound.tail_mass(t_out) + 10.0 ** (-ctx.dps + 6)] * len(out)
    if not isinstance(x, (list, tuple)):
        return out[0], err[0]
    return out, err
