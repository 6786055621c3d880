"""Command-line front end.

Subcommands: prolate, project, psi, efunc, kernel-matrix, verify.
Configuration comes from an optional TOML file plus flag overrides; all
numeric output carries 17 significant digits.  Exit codes: 0 pass,
1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np
import tomli

from . import checks, plots
from .corpus import corpus_by_tag
from .engine import workspace_for
from .errors import DomainError, InvalidArgumentError
from .fredholm import fredholm_det
from .projection import project, verify_sonine
from .report import fmt, write_csv, write_json
from .structure import e_theorem8, e_theorem9, psi_for

DEFAULT_TOLERANCES = {
    "sonine": 1e-7,
    "projection_algebra": 1e-8,
    "route_agreement": 1e-6,
}


@dataclass
class RunConfig:
    lam: float = 1.0
    grid_n: int | None = None
    t_out: float = 60.0
    w_list: list = field(default_factory=lambda: [0.75, 1.5, 0.6 + 2.0j])
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: str = "out"
    format: str = "csv"
    plot: bool = True
    suites: tuple | None = None
    lambdas: tuple = checks.ACCEPTANCE_LAMBDAS

    def validate(self):
        if not self.lam > 0:
            raise InvalidArgumentError("lambda must be positive")
        if self.grid_n is not None and self.grid_n < 16:
            raise InvalidArgumentError("grid must be at least 16")
        if not self.t_out > self.lam:
            raise InvalidArgumentError("t_out must exceed lambda")
        if self.format not in ("csv", "json"):
            raise InvalidArgumentError("format must be csv or json")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise InvalidArgumentError(f"tolerance {k} must be positive")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse complex number {text!r}") from exc


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config, "rb") as fh:
            data = tomli.load(fh)
        cfg.lam = float(data.get("lambda", cfg.lam))
        if "grid" in data:
            cfg.grid_n = int(data["grid"])
        cfg.t_out = float(data.get("t_out", cfg.t_out))
        if "w" in data:
            cfg.w_list = [_parse_complex(str(v)) for v in data["w"]]
        cfg.output_dir = str(data.get("out", cfg.output_dir))
        cfg.format = str(data.get("format", cfg.format))
        if "lambdas" in data:
            cfg.lambdas = tuple(float(v) for v in data["lambdas"])
        cfg.tolerances.update({k: float(v) for k, v in data.get("tolerances", {}).items()})
    if getattr(args, "lam", None) is not None:
        cfg.lam = args.lam
    if getattr(args, "grid", None) is not None:
        cfg.grid_n = args.grid
    if getattr(args, "t_out", None) is not None:
        cfg.t_out = args.t_out
    if getattr(args, "w", None):
        cfg.w_list = [_parse_complex(v) for v in args.w]
    if getattr(args, "out", None) is not None:
        cfg.output_dir = args.out
    if getattr(args, "format", None) is not None:
        cfg.format = args.format
    if getattr(args, "no_plot", False):
        cfg.plot = False
    if getattr(args, "suite", None):
        cfg.suites = tuple(args.suite)
    if getattr(args, "lambdas", None):
        cfg.lambdas = tuple(float(v) for v in args.lambdas)
    cfg.validate()
    return cfg


def _outpath(cfg, name):
    return os.path.join(cfg.output_dir, name)


def cmd_prolate(cfg: RunConfig) -> int:
    ws = workspace_for(cfg.lam, cfg.grid_n)
    basis = ws.basis
    mus = basis.mus_f()
    nres = basis.n_resolved()
    rows = [(k, mus[k]) for k in range(nres)]
    write_csv(_outpath(cfg, "prolate_eigenvalues.csv"), ("n", "mu_n"), rows)
    kmax = min(6, nres)
    efuns = [basis.efun(k).values_complex().real for k in range(kmax)]
    nodes = ws.nodes_f()
    write_csv(_outpath(cfg, "prolate_eigenfunctions.csv"),
              ("t",) + tuple(f"e_{k}" for k in range(kmax)),
              [(nodes[i],) + tuple(e[i] for e in efuns) for i in range(len(nodes))])
    write_json(_outpath(cfg, "prolate_report.json"), {
        "config": ws.describe(),
        "resolved_modes": nres,
        "mu_0": mus[0] if nres else None,
        "fredholm_det": {
            "1-F": fredholm_det(basis, "1-F"),
            "1+F": fredholm_det(basis, "1+F"),
            "1-D": fredholm_det(basis, "1-D"),
        },
    })
    if cfg.plot:
        plots.plot_prolate(mus[:nres], ws.lam, _outpath(cfg, "prolate_eigenvalues.png"))
        plots.plot_eigenfunctions(nodes, efuns, ws.lam,
                                  _outpath(cfg, "prolate_eigenfunctions.png"))
    print(f"prolate: {nres} resolved modes written to {cfg.output_dir}")
    return 0


def cmd_psi(cfg: RunConfig) -> int:
    ws = workspace_for(cfg.lam, cfg.grid_n)
    pair = psi_for(ws)
    xs = np.linspace(0.0, 3.0 * ws.lam, 361)
    if ws.ctx.is_hp:
        pp = [ws.ctx.to_complex(pair.psi(+1, ws.ctx.real(float(x)))).real for x in xs]
        pm = [ws.ctx.to_complex(pair.psi(-1, ws.ctx.real(float(x)))).real for x in xs]
    else:
        pp = np.real(pair.psi(+1, xs))
        pm = np.real(pair.psi(-1, xs))
    write_csv(_outpath(cfg, "psi_samples.csv"), ("t", "psi_plus", "psi_minus"),
              list(zip(xs, pp, pm)))
    write_json(_outpath(cfg, "psi_report.json"), {
        "config": ws.describe(),
        "residual_plus": pair.res_plus,
        "residual_minus": pair.res_minus,
        "psi_plus_at_0": float(np.real(pp[0])),
    })
    if cfg.plot:
        plots.plot_psi(xs, pp, pm, ws.lam, _outpath(cfg, "psi.png"))
    print(f"psi: residuals {pair.res_plus:.2e}/{pair.res_minus:.2e}; "
          f"outputs in {cfg.output_dir}")
    return 0


def cmd_project(cfg: RunConfig, input_spec) -> int:
    ws = workspace_for(cfg.lam, cfg.grid_n)
    name = input_spec["name"]
    f = corpus_by_tag(name, ws.lam) if not input_spec.get("params") else \
        __import__("sonine.corpus", fromlist=["corpus_function"]).corpus_function(
            name, ws.lam, **input_spec["params"])
    g = project(f, ws)
    rep = verify_sonine(g, cfg.tolerances["sonine"], ws)
    ts = np.linspace(ws.lam, 4.0 * ws.lam, 301)
    if ws.ctx.is_hp:
        vals = [ws.ctx.to_complex(g.outer.value(ws.ctx.real(float(t)), ws)) for t in ts]
        vals = np.array(vals)
    else:
        vals = g.outer.value(ts, ws)
    write_csv(_outpath(cfg, f"projection_{name}.csv"), ("t", "re", "im"),
              [(t, v.real, v.imag) for t, v in zip(ts, vals)])
    write_json(_outpath(cfg, f"projection_{name}.json"),
               {"config": ws.describe(), "verify": rep})
    if cfg.plot:
        plots.plot_projection(ts, vals, ws.lam, name,
                              _outpath(cfg, f"projection_{name}.png"))
    print(f"project {name}: residuals r1={rep['r1']:.2e} r2={rep['r2']:.2e} "
          f"(passed: {rep['passed']})")
    return 0


def cmd_efunc(cfg: RunConfig) -> int:
    ws = workspace_for(cfg.lam, cfg.grid_n)
    records = []
    for w in cfg.w_list:
        w = complex(w)
        entry = {"w_re": w.real, "w_im": w.imag}
        try:
            ev8 = e_theorem8(w, ws)
            entry.update(ev8.as_record())
        except DomainError as exc:
            entry["error"] = str(exc)
            records.append(entry)
            continue
        if w.real > 0.5:
            ev9 = e_theorem9(w, ws)
            entry["E9_re"] = ev9.E.real
            entry["E9_im"] = ev9.E.imag
            entry["discrepancy"] = abs(ev8.E - ev9.E) / max(abs(ev8.E), 1e-300)
            entry["methods"] = "theorem8+theorem9"
        else:
            entry["methods"] = "theorem8"
        records.append(entry)
    write_json(_outpath(cfg, "efunc.json"), {"config": ws.describe(),
                                             "records": records})
    header = ("w_re", "w_im", "E_re", "E_im", "A_re", "A_im", "B_re", "B_im",
              "method", "err")
    rows = [tuple(r.get(k, "") for k in header) for r in records if "E_re" in r]
    write_csv(_outpath(cfg, "efunc.csv"), header, rows)
    if cfg.plot and rows:
        plots.plot_efunc(records, ws.lam, _outpath(cfg, "efunc.png"))
    n_err = sum(1 for r in records if "error" in r)
    print(f"efunc: {len(records) - n_err} evaluations, {n_err} domain errors; "
          f"outputs in {cfg.output_dir}")
    return 0


def cmd_kernel_matrix(cfg: RunConfig) -> int:
    ws = workspace_for(cfg.lam, cfg.grid_n)
    for K, name in ((ws.F, "F_lambda"), (ws.D, "D_lambda")):
        M = K.entries_f()
        write_csv(_outpath(cfg, f"kernel_{name}.csv"),
                  tuple(f"c{j}" for j in range(M.shape[1])),
                  [tuple(row) for row in M])
        if cfg.plot:
            plots.plot_matrix(M, name, ws.lam, _outpath(cfg, f"kernel_{name}.png"))
    print(f"kernel-matrix: wrote F and D ({ws.n} x {ws.n}) to {cfg.output_dir}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    report = checks.run_suites(cfg.lambdas, cfg.grid_n, cfg.suites)
    write_json(_outpath(cfg, "verify_report.json"), report.as_dict())
    for line in report.summary_lines():
        print(line)
    if cfg.plot:
        plots.plot_verify(report.records, _outpath(cfg, "verify_report.png"))
    n_fail = sum(1 for r in report.records if not r.passed)
    print(f"verify: {len(report.records)} checks, {n_fail} failures")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sonine",
                                description="Sonine-space numerics: prolate spectra, "
                                            "projections, structure functions")
    p.add_argument("--config", help="TOML configuration file")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--grid", type=int)
        sp.add_argument("--t-out", dest="t_out", type=float)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--no-plot", action="store_true")

    common(sub.add_parser("prolate", help="eigenvalues and eigenfunctions"))
    sp = sub.add_parser("project", help="project a corpus function")
    common(sp)
    sp.add_argument("--function", help="corpus function name")
    sp.add_argument("--input", help="JSON file naming the corpus function")
    common(sub.add_parser("psi", help="distinguished solutions psi_+/-"))
    sp = sub.add_parser("efunc", help="structure functions E, A, B")
    common(sp)
    sp.add_argument("--w", action="append", help="spectral point (repeatable)")
    common(sub.add_parser("kernel-matrix", help="dump the Nystrom matrices"))
    sp = sub.add_parser("verify", help="run the verification suites")
    common(sp)
    sp.add_argument("--suite", action="append",
                    help="restrict to named suites (repeatable)")
    sp.add_argument("--lambdas", nargs="+",
                    help="interval truncation values to verify")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args)
        if args.command == "prolate":
            return cmd_prolate(cfg)
        if args.command == "psi":
            return cmd_psi(cfg)
        if args.command == "project":
            if args.input:
                with open(args.input, "r", encoding="utf-8") as fh:
                    spec = json.load(fh)
                if "name" not in spec:
                    raise InvalidArgumentError("input spec must contain 'name'")
            elif args.function:
                spec = {"name": args.function}
            else:
                raise InvalidArgumentError("project needs --function or --input")
            return cmd_project(cfg, spec)
        if args.command == "efunc":
            return cmd_efunc(cfg)
        if args.command == "kernel-matrix":
            return cmd_kernel_matrix(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        raise InvalidArgumentError(f"unknown command {args.command}")
    except (InvalidArgumentError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
