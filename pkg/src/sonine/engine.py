"""Workspace: assembled quadrature rule, kernels, and cached decompositions
for one (lambda, grid, precision) configuration."""

from __future__ import annotations

import math

import numpy as np

from .context import FLOAT64, context_for, spectral_gap_estimate
from .errors import InvalidArgumentError
from .fredholm import ProlateBasis, prolate_eigen, solve_one_minus_D, solve_resolvent
from .kernels import (InnerFunction, KernelMatrix, build_d_lambda,
                      build_f_lambda, cosine_transform_of_inner)
from .quadrature import gauss_legendre

DEFAULT_GRID_N = 400


def _matrix_square(K: KernelMatrix, ctx):
    if not ctx.is_hp:
        M = K.entries @ K.entries
        return 0.5 * (M + M.T)
    ctx.activate()
    n = len(K.entries)
    A = K.entries
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for j in range(i, n):
            Aj = A[j]
            acc = Ai[0] * Aj[0]
            for k in range(1, n):
                acc = acc + Ai[k] * Aj[k]
            out[i][j] = acc
            out[j][i] = acc
    return out


def hp_grid_n(lam: float) -> int:
    """Grid for the hp lane: spectral quadrature needs only O(c) points."""
    c = 2.0 * math.pi * lam * lam
    return max(48, int(math.ceil(1.15 * c)))


class Workspace:
    """Everything downstream operations need for one configuration.

    The numeric context is chosen from the estimated spectral gap unless
    forced; the hp lane uses its own (smaller) spectrally-converged grid.
    """

    def __init__(self, lam: float, n: int | None = None, precision: str = "auto"):
        if not lam > 0:
            raise InvalidArgumentError(f"need lambda > 0, got {lam}")
        self.lam = float(lam)
        self.ctx = context_for(lam, precision)
        if n is None:
            n = DEFAULT_GRID_N if not self.ctx.is_hp else hp_grid_n(lam)
        self.n = int(n)
        self.rule = gauss_legendre(self.n, 0.0, lam, self.ctx)
        self.F = build_f_lambda(self.rule)
        self.D = build_d_lambda(self.rule)
        # solves use the exact square of the cosine matrix (the operator's
        # primary definition); the folded-sinc matrix above is kept for its
        # own consistency checks against F^2
        self.D_solve = KernelMatrix("D_lambda", self.rule, _matrix_square(self.F, self.ctx))
        self._basis = None
        self._solver_cache = {}
        self.gap_estimate = spectral_gap_estimate(lam)

    # -- cached pieces ----------------------------------------------------
    @property
    def basis(self) -> ProlateBasis:
        if self._basis is None:
            self._basis = prolate_eigen(self.F)
        return self._basis

    # -- value-space helpers ----------------------------------------------
    def inner(self, values) -> InnerFunction:
        return InnerFunction(self.rule, values)

    def sample(self, fn) -> InnerFunction:
        """Sample a callable (t, ctx) -> value at the nodes."""
        ctx = self.ctx
        if ctx.is_hp:
            return self.inner([fn(x, ctx) for x in self.rule.nodes])
        return self.inner(np.asarray(fn(self.rule.nodes, ctx)))

    def apply_F(self, values):
        """Value-space action of the truncated cosine operator."""
        ctx = self.ctx
        if not ctx.is_hp:
            u = InnerFunction(self.rule, values)
            return cosine_transform_of_inner(u, self.rule.nodes)
        ctx.activate()
        out = []
        twopi = 2 * ctx.pi
        for xi in self.rule.nodes:
            tot = ctx.comp(0)
            for yj, wj, vj in zip(self.rule.nodes, self.rule.weights, values):
                tot = tot + wj * ctx.cos(twopi * xi * yj) * vj
            out.append(2 * tot)
        return out

    def cti(self, u, x):
        if not isinstance(u, InnerFunction):
            u = self.inner(u)
        return cosine_transform_of_inner(u, x)

    def solve_pm(self, sign: int, g) -> InnerFunction:
        if not isinstance(g, InnerFunction):
            g = self.inner(g)
        return solve_resolvent(self.F, sign, g, self._solver_cache)

    def solve_D(self, g) -> InnerFunction:
        if not isinstance(g, InnerFunction):
            g = self.inner(g)
        return solve_one_minus_D(self.D_solve, g, self._solver_cache)

    # -- reporting helpers --------------------------------------------------
    def nodes_f(self) -> np.ndarray:
        return self.rule.nodes_f

    def weights_f(self) -> np.ndarray:
        return self.rule.weights_f

    def describe(self) -> dict:
        return {
            "lambda": self.lam,
            "grid_n": self.n,
            "precision": "float64" if not self.ctx.is_hp else f"hp:{self.ctx.dps}",
            "gap_estimate": self.gap_estimate,
        }


_CACHE: dict = {}


def workspace_for(lam: float, n: int | None = None, precision: str = "auto") -> Workspace:
    key = (round(float(lam), 12), n, precision)
    if key not in _CACHE:
        _CACHE[key] = Workspace(lam, n, precision)
    return _CACHE[key]
