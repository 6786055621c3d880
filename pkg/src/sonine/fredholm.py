"""Prolate eigenbasis of the truncated cosine operator, resolvent solves,
and Fredholm determinants."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .context import FLOAT64
from .errors import AccuracyWarning, InvalidArgumentError, NumericError
from .kernels import InnerFunction, KernelMatrix, TWO_PI

RESOLVED_CUTOFF_F = 1e-13  # below this, float Nystrom eigenvalues are noise


@dataclass
class ProlateBasis:
    """Eigenpairs (mu_n, e_n) of the truncated cosine operator, |mu| decreasing.

    ``vectors`` holds the orthonormal eigenvectors of the symmetrised matrix
    (columns, in node order); ``efuns[n]`` are the value-space samples
    e_n(x_i) = vectors[i, n] / sqrt(w_i), orthonormal for the half-line inner
    product.  Eigenvectors are sign-normalised so e_n > 0 at the smallest node.
    """

    rule: object
    mus: object
    vectors: object
    resolved_cutoff: float

    @property
    def n(self):
        return len(self.mus)

    def mus_f(self) -> np.ndarray:
        if self.rule.ctx.is_hp:
            return np.array([float(m) for m in self.mus])
        return np.asarray(self.mus)

    def n_resolved(self) -> int:
        mf = np.abs(self.mus_f())
        return int(np.sum(mf > self.resolved_cutoff))

    def efun(self, k) -> InnerFunction:
        ctx = self.rule.ctx
        if ctx.is_hp:
            sw = [ctx.sqrt(w) for w in self.rule.weights]
            vals = [self.vectors[i][k] / sw[i] for i in range(self.n)]
            mu = self.mus[k]
        else:
            sw = np.sqrt(self.rule.weights)
            vals = self.vectors[:, k] / sw
            mu = self.mus[k]
        u = InnerFunction(self.rule, vals)
        if abs(float(mu)) > self.resolved_cutoff:
            # eigen-relation extension e(x) = F_+(e)(x)/mu
            if ctx.is_hp:
                coeffs = [2 * w * v / mu for w, v in zip(self.rule.weights, vals)]
                freqs = [2 * ctx.pi * y for y in self.rule.nodes]
            else:
                coeffs = 2.0 * self.rule.weights * vals / mu
                freqs = TWO_PI * self.rule.nodes
            u.ext_cos = (coeffs, freqs)
        return u


def _jacobi_eigh_hp(M, ctx, max_sweeps=60):
    """Cyclic Jacobi eigendecomposition for a symmetric hp matrix (lists)."""
    ctx.activate()
    n = len(M)
    a = [row[:] for row in M]
    V = [[ctx.real(1) if i == j else ctx.real(0) for j in range(n)] for i in range(n)]
    import gmpy2
    sqrt = gmpy2.sqrt
    norm = max(abs(a[i][j]) for i in range(n) for j in range(n))
    conv = ctx.eps * norm * n
    for sweep in range(max_sweeps):
        off = max((abs(a[i][j]) for i in range(n) for j in range(i + 1, n)), default=ctx.real(0))
        if off < conv:
            break
        skip = off * ctx.real("1e-6")
        for p in range(n - 1):
            ap = a[p]
            for q in range(p + 1, n):
                apq = ap[q]
                if abs(apq) <= skip:
                    continue
                aq = a[q]
                theta = (aq[q] - ap[p]) / (2 * apq)
                t = 1 / (abs(theta) + sqrt(theta * theta + 1))
                if theta < 0:
                    t = -t
                c = 1 / sqrt(t * t + 1)
                s = t * c
                for k in range(n):
                    akp = a[k][p]
                    akq = a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    akp = ap[k]
                    akq = aq[k]
                    ap[k] = c * akp - s * akq
                    aq[k] = s * akp + c * akq
                for k in range(n):
                    vk = V[k]
                    vkp = vk[p]
                    vkq = vk[q]
                    vk[p] = c * vkp - s * vkq
                    vk[q] = s * vkp + c * vkq
    else:
        raise NumericError("hp Jacobi eigensolver did not converge")
    vals = [a[i][i] for i in range(n)]
    return vals, V


def prolate_eigen(F: KernelMatrix) -> ProlateBasis:
    """Full symmetric eigendecomposition of the truncated cosine matrix."""
    if F.kind != "F_lambda":
        raise InvalidArgumentError("prolate_eigen expects the F_lambda kernel")
    ctx = F.rule.ctx
    if not ctx.is_hp:
        try:
            vals, vecs = np.linalg.eigh(F.entries)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NumericError(f"eigensolver failed: {exc}") from exc
        order = np.argsort(-np.abs(vals), kind="stable")
        vals = vals[order]
        vecs = vecs[:, order]
        signs = np.where(vecs[0, :] < 0, -1.0, 1.0)
        zero_first = np.abs(vecs[0, :]) < 1e-300
        if np.any(zero_first):
            for k in np.where(zero_first)[0]:
                nz = np.nonzero(np.abs(vecs[:, k]) > 1e-300)[0]
                signs[k] = 1.0 if not len(nz) or vecs[nz[0], k] > 0 else -1.0
        vecs = vecs * signs
        return ProlateBasis(F.rule, vals, vecs, RESOLVED_CUTOFF_F)
    ctx.activate()
    vals, V = _jacobi_eigh_hp(F.entries, ctx)
    n = len(vals)
    order = sorted(range(n), key=lambda i: -abs(vals[i]))
    mus = [vals[i] for i in order]
    vecs = [[V[i][k] for k in order] for i in range(n)]
    for k in range(n):
        if vecs[0][k] < 0:
            for i in range(n):
                vecs[i][k] = -vecs[i][k]
    cutoff = 10.0 ** (-(ctx.dps - 12))
    return ProlateBasis(F.rule, mus, vecs, cutoff)


def _solve_sym_f(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Direct solve plus one extended-precision refinement step."""
    x = np.linalg.solve(A, b)
    Al = A.astype(np.longdouble)
    if np.iscomplexobj(b):
        r = b.astype(np.clongdouble) - Al @ x.astype(np.clongdouble)
    else:
        r = b.astype(np.longdouble) - Al @ x.astype(np.longdouble)
    x = x + np.linalg.solve(A, r.astype(b.dtype))
    return x


def _lu_factor_hp(A, ctx):
    ctx.activate()
    n = len(A)
    lu = [row[:] for row in A]
    piv = list(range(n))
    for k in range(n):
        pmax = max(range(k, n), key=lambda i: abs(lu[i][k]))
        if float(abs(lu[pmax][k])) == 0.0:
            raise NumericError("singular matrix in hp LU")
        if pmax != k:
            lu[k], lu[pmax] = lu[pmax], lu[k]
            piv[k], piv[pmax] = piv[pmax], piv[k]
        inv = 1 / lu[k][k]
        for i in range(k + 1, n):
            m = lu[i][k] * inv
            lu[i][k] = m
            if float(abs(m)) != 0.0:
                row_i = lu[i]
                row_k = lu[k]
                for j in range(k + 1, n):
                    row_i[j] = row_i[j] - m * row_k[j]
    return lu, piv


def _lu_solve_hp(lu, piv, b, ctx):
    n = len(lu)
    x = [b[piv[i]] for i in range(n)]
    for i in range(1, n):
        row = lu[i]
        acc = x[i]
        for j in range(i):
            acc = acc - row[j] * x[j]
        x[i] = acc
    for i in range(n - 1, -1, -1):
        row = lu[i]
        acc = x[i]
        for j in range(i + 1, n):
            acc = acc - row[j] * x[j]
        x[i] = acc / row[i]
    return x


class _HPSolver:
    def __init__(self, A, ctx):
        self.ctx = ctx
        self.lu, self.piv = _lu_factor_hp(A, ctx)

    def solve(self, b):
        ctx = self.ctx
        if any(ctx.is_complex(v) for v in b):
            re = _lu_solve_hp(self.lu, self.piv, [v.real for v in b], ctx)
            im = _lu_solve_hp(self.lu, self.piv, [v.imag for v in b], ctx)
            return [ctx.comp(r, i) for r, i in zip(re, im)]
        return _lu_solve_hp(self.lu, self.piv, b, ctx)


def _resolvent_matrix(K: KernelMatrix, sign: float):
    ctx = K.rule.ctx
    if not ctx.is_hp:
        return np.eye(K.rule.n) + sign * K.entries
    one = ctx.real(1)
    n = K.rule.n
    s = ctx.real(sign)
    return [[(one if i == j else ctx.real(0)) + s * K.entries[i][j] for j in range(n)]
            for i in range(n)]


def solve_resolvent(F: KernelMatrix, sign: int, g: InnerFunction,
                    _solver_cache: dict | None = None) -> InnerFunction:
    """Solve (1 + sign F_lambda) u = g in value space.

    Always solvable: the spectrum of 1 + sign F lies in (1-|mu_0|, 1+|mu_0|).
    """
    if sign not in (+1, -1):
        raise InvalidArgumentError("sign must be +1 or -1")
    ctx = F.rule.ctx
    if not ctx.is_hp:
        sw = np.sqrt(F.rule.weights)
        A = _resolvent_matrix(F, float(sign))
        b = sw * np.asarray(g.values)
        y = _solve_sym_f(A, b)
        return InnerFunction(F.rule, y / sw)
    ctx.activate()
    key = (id(F), sign)
    if _solver_cache is not None and key in _solver_cache:
        solver = _solver_cache[key]
    else:
        solver = _HPSolver(_resolvent_matrix(F, sign), ctx)
        if _solver_cache is not None:
            _solver_cache[key] = solver
    sw = [ctx.sqrt(w) for w in F.rule.weights]
    b = [s * v for s, v in zip(sw, g.values)]
    y = solver.solve(b)
    return InnerFunction(F.rule, [v / s for v, s in zip(y, sw)])


def solve_one_minus_D(D: KernelMatrix, g: InnerFunction,
                      _solver_cache: dict | None = None) -> InnerFunction:
    """Solve (1 - D_lambda) u = g; spectrum of 1 - D is within (1-mu_0^2, 1]."""
    if D.kind != "D_lambda":
        raise InvalidArgumentError("solve_one_minus_D expects the D_lambda kernel")
    ctx = D.rule.ctx
    if not ctx.is_hp:
        sw = np.sqrt(D.rule.weights)
        A = np.eye(D.rule.n) - D.entries
        b = sw * np.asarray(g.values)
        y = _solve_sym_f(A, b)
        return InnerFunction(D.rule, y / sw)
    ctx.activate()
    key = (id(D), "1-D")
    if _solver_cache is not None and key in _solver_cache:
        solver = _solver_cache[key]
    else:
        solver = _HPSolver(_resolvent_matrix(D, -1), ctx)
        if _solver_cache is not None:
            _solver_cache[key] = solver
    sw = [ctx.sqrt(w) for w in D.rule.weights]
    b = [s * v for s, v in zip(sw, g.values)]
    y = solver.solve(b)
    return InnerFunction(D.rule, [v / s for v, s in zip(y, sw)])


def residual_norm(K: KernelMatrix, sign_or_kind, u: InnerFunction, g: InnerFunction) -> float:
    """|| (1 +- K) u - g ||_2 in the weighted (half-line) norm."""
    ctx = K.rule.ctx
    w = K.rule.weights_f
    sw = np.sqrt(w)
    uf = u.values_complex()
    gf = g.values_complex()
    Mf = K.entries_f()
    s = float(sign_or_kind)
    r = (sw * uf) + s * (Mf @ (sw * uf)) - sw * gf
    return float(np.linalg.norm(r))


def fredholm_det(basis: ProlateBasis, which: str) -> float:
    """Fredholm determinant over the interval: prod (1 + sign mu_n) or
    prod (1 - mu_n^2), truncated where factors differ from 1 below cutoff."""
    if which not in ("1-F", "1+F", "1-D"):
        raise InvalidArgumentError("which must be one of '1-F', '1+F', '1-D'")
    ctx = basis.rule.ctx
    trunc = 1e-16 if not ctx.is_hp else 10.0 ** (-(basis.rule.ctx.dps - 4))
    mf = basis.mus_f()
    if basis.n_resolved() >= basis.n:
        warnings.warn("prolate spectrum may be unresolved past the truncation level",
                      AccuracyWarning)
    if not ctx.is_hp:
        mus = np.asarray(basis.mus)
        keep = np.abs(mus) >= trunc
        m = mus[keep]
        if which == "1-F":
            return float(np.prod(1.0 - m))
        if which == "1+F":
            return float(np.prod(1.0 + m))
        return float(np.prod(1.0 - m * m))
    ctx.activate()
    out = ctx.real(1)
    for mu in basis.mus:
        if float(abs(mu)) < trunc:
            continue
        if which == "1-F":
            out = out * (1 - mu)
        elif which == "1+F":
            out = out * (1 + mu)
        else:
            out = out * (1 - mu * mu)
    return float(out)
