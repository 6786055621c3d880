"""Gauss-Legendre rules and composite-panel quadrature helpers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .context import FLOAT64, FloatContext
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights on the open interval (a, b).

    Float contexts store numpy arrays; hp contexts store lists of mpfr.
    ``nodes_f``/``weights_f`` are float64 mirrors for reporting and seeding.
    """

    a: object
    b: object
    nodes: object
    weights: object
    ctx: object = field(default=FLOAT64, repr=False)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def nodes_f(self) -> np.ndarray:
        if self.ctx.is_hp:
            return np.array([float(v) for v in self.nodes])
        return self.nodes

    @property
    def weights_f(self) -> np.ndarray:
        if self.ctx.is_hp:
            return np.array([float(v) for v in self.weights])
        return self.weights


def _legendre_and_deriv(k, t, one):
    p0, p1 = one, t
    for j in range(2, k + 1):
        p0, p1 = p1, ((2 * j - 1) * t * p1 - (j - 1) * p0) / j
    dp = k * (t * p1 - p0) / (t * t - 1)
    return p1, dp


def gauss_legendre(n: int, a, b, ctx=FLOAT64) -> QuadratureRule:
    """Gauss-Legendre rule mapped affinely to (a, b)."""
    if n < 1:
        raise InvalidArgumentError(f"need n >= 1, got {n}")
    if not float(a) < float(b):
        raise InvalidArgumentError(f"need a < b, got ({a}, {b})")
    if isinstance(ctx, FloatContext):
        x, w = np.polynomial.legendre.leggauss(n)
        nodes = 0.5 * (float(b) - float(a)) * (x + 1.0) + float(a)
        weights = 0.5 * (float(b) - float(a)) * w
        return QuadratureRule(float(a), float(b), nodes, weights, ctx)
    ctx.activate()
    seeds, _ = np.polynomial.legendre.leggauss(n)
    one = ctx.real(1)
    aa, bb = ctx.real(a), ctx.real(b)
    half = (bb - aa) / 2
    nodes, weights = [], []
    for s in seeds:
        t = ctx.real(float(s))
        for _ in range(8):
            p, dp = _legendre_and_deriv(n, t, one)
            step = p / dp
            t = t - step
            if abs(step) < ctx.eps * 4:
                break
        p, dp = _legendre_and_deriv(n, t, one)
        nodes.append(half * (t + 1) + aa)
        weights.append(half * 2 / ((1 - t * t) * dp * dp))
    return QuadratureRule(aa, bb, nodes, weights, ctx)


def geometric_edges(a, b, ratio=2.0, first=None):
    """Panel edges from a to b, width growing geometrically from ``first``."""
    a, b = float(a), float(b)
    if first is None:
        first = (b - a) / 64.0
    edges = [a]
    h = first
    while edges[-1] + h < b:
        edges.append(edges[-1] + h)
        h *= ratio
    edges.append(b)
    return edges


def panel_rule(edges, k, ctx=FLOAT64):
    """Composite Gauss-Legendre rule over consecutive panels."""
    if isinstance(ctx, FloatContext):
        x, w = np.polynomial.legendre.leggauss(k)
        nodes, weights = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            nodes.append(0.5 * (hi - lo) * (x + 1.0) + lo)
            weights.append(0.5 * (hi - lo) * w)
        return np.concatenate(nodes), np.concatenate(weights)
    ctx.activate()
    base = gauss_legendre(k, -1.0, 1.0, ctx)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        lo, hi = ctx.real(lo), ctx.real(hi)
        half = (hi - lo) / 2
        mid = (hi + lo) / 2
        for t, w in zip(base.nodes, base.weights):
            nodes.append(half * t + mid)
            weights.append(half * w)
    return nodes, weights


def refine_edges(edges):
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        out.extend([lo, 0.5 * (lo + hi)])
    out.append(edges[-1])
    return out
