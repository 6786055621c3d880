"""Figure rendering for the report paths.  All figures land next to the
delimited output; CSV stays the canonical data product."""

from __future__ import annotations

import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_prolate(mus, lam, path):
    mus = np.asarray(mus, dtype=float)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    n = np.arange(len(mus))
    ax1.semilogy(n, np.abs(mus), "o-", ms=3)
    ax1.set_xlabel("n")
    ax1.set_ylabel(r"$|\mu_n|$")
    ax1.set_title(f"prolate spectrum, $\\lambda$ = {lam:g}")
    ax2.plot(n[:20], mus[:20], "s-", ms=3)
    ax2.axhline(0.0, color="k", lw=0.6)
    ax2.set_xlabel("n")
    ax2.set_ylabel(r"$\mu_n$")
    ax2.set_title("sign alternation (first 20)")
    _save(fig, path)


def plot_eigenfunctions(nodes, efuns, lam, path, count=4):
    fig, ax = plt.subplots(figsize=(6, 3.4))
    for k, vals in enumerate(efuns[:count]):
        ax.plot(nodes, np.real(vals), lw=1.2, label=f"$e_{{{k}}}$")
    ax.set_xlabel("t")
    ax.set_title(f"leading interval eigenfunctions, $\\lambda$ = {lam:g}")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_psi(xs, psi_p, psi_m, lam, path):
    fig, ax = plt.subplots(figsize=(6.5, 3.4))
    ax.plot(xs, np.real(psi_p), lw=1.2, label=r"$\psi_+$")
    ax.plot(xs, np.real(psi_m), lw=1.2, label=r"$\psi_-$")
    ax.axvline(lam, color="k", lw=0.6, ls="--")
    ax.set_xlabel("t")
    ax.set_title(f"distinguished solutions, $\\lambda$ = {lam:g}")
    ax.legend()
    _save(fig, path)


def plot_projection(ts, vals, lam, source, path):
    fig, ax = plt.subplots(figsize=(6.5, 3.4))
    ax.plot(ts, np.real(vals), lw=1.2)
    ax.axvline(lam, color="k", lw=0.6, ls="--")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\pi_\lambda f$")
    ax.set_title(f"projection of {source}, $\\lambda$ = {lam:g}")
    _save(fig, path)


def plot_efunc(records, lam, path):
    fig, ax = plt.subplots(figsize=(6.5, 3.8))
    by_re = {}
    for r in records:
        if "E_re" not in r:
            continue
        by_re.setdefault(r["w_re"], []).append(r)
    for re_w, rows in sorted(by_re.items()):
        rows = sorted(rows, key=lambda r: r["w_im"])
        im = [r["w_im"] for r in rows]
        mag = [math.hypot(r["E_re"], r["E_im"]) for r in rows]
        if len(rows) > 1:
            ax.semilogy(im, mag, "o-", ms=3, label=f"Re w = {re_w:g}")
        else:
            ax.semilogy(im, mag, "o", ms=4, label=f"w = {re_w:g}{im[0]:+g}i")
    ax.set_xlabel("Im w")
    ax.set_ylabel("|E(w)|")
    ax.set_title(f"structure function modulus, $\\lambda$ = {lam:g}")
    ax.legend(fontsize=7)
    _save(fig, path)


def plot_verify(records, path):
    rows = [r for r in records if r.tolerance > 0]
    fig, ax = plt.subplots(figsize=(7, 0.26 * max(len(rows), 8) + 1.2))
    names = [f"{r.suite}/{r.name}"[:58] for r in rows]
    ratios = [max(r.measured / r.tolerance, 1e-18) for r in rows]
    colors = ["tab:green" if r.passed else "tab:red" for r in rows]
    y = np.arange(len(rows))
    ax.barh(y, ratios, color=colors, height=0.7)
    ax.axvline(1.0, color="k", lw=0.8, ls="--")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=6)
    ax.set_xscale("log")
    ax.set_xlabel("measured / tolerance")
    ax.invert_yaxis()
    _save(fig, path)


def plot_matrix(entries, kind, lam, path):
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    im = ax.imshow(np.asarray(entries), origin="lower", cmap="RdBu_r")
    fig.colorbar(im, ax=ax, shrink=0.85)
    ax.set_title(f"{kind}, $\\lambda$ = {lam:g}")
    _save(fig, path)
