"""Command line entry point: ``cartanlab <command> ...``.

Exit status: 0 when every verdict passes, 1 when any verdict is FAIL or
NOT-FLAT, 2 on input errors. ``--json`` prints a machine report whose bytes
depend only on the inputs, the seed and the grid parameters.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import linalg as la
from .algebra import jacobi_witness
from .algebras import MatrixAlgebra
from .coframe import (SingularCoframe, DegenerateFrame, curvature, curvature_split_check, flatness_check,
                      k_integrability_witness, second_order_split_check, canonical_lift)
from .extensions import (EquivarianceViolated, check_exact, check_reductive, induced_quotient_bracket,
                         reduction_tower, second_order_model, semidirect_iso_check, symbol_ideal)
from .groupoid import (FreeTransitiveAction, build_reductive_extension, divisor_identity_residual,
                       groupoid_axiom_residual, holonomic_bisection_residual, multiplicativity_residual)
from .io import (InputError, Source, algebra_to_toml, catalog_names, kind_of, load_algebra, load_algebra_ref,
                 load_extension, load_groupoid, load_pfaffian, load_scenario, open_source)

SPLIT_TOL = 1e-8
DIVISOR_TOL = 1e-12
AXIOM_TOL = 1e-12
HOLONOMIC_TOL = 1e-6
MULT_TOL = 1e-5

FAILING = {"FAIL", "NOT-FLAT"}


@dataclass
class Report:
    command: str
    seed: int | None = None
    inputs: list[dict] = field(default_factory=list)
    verdicts: list[dict] = field(default_factory=list)
    maxima: dict[str, float] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    def add_inputs(self, sources: list[Source]):
        seen = {i["path"] for i in self.inputs}
        for s in sources:
            if s.label not in seen:
                self.inputs.append({"path": s.label, "sha256": s.sha256})
                seen.add(s.label)

    def verdict(self, name: str, status: str, witness: Any = None):
        self.verdicts.append({"name": name, "status": status, "witness": witness})

    def check(self, name: str, ok: bool, witness: Any = None):
        self.verdict(name, "PASS" if ok else "FAIL", None if ok else witness)

    @property
    def failed(self) -> bool:
        return any(v["status"] in FAILING for v in self.verdicts)

    def to_json(self) -> str:
        d = {"command": self.command, "seed": self.seed, "inputs": self.inputs, "verdicts": self.verdicts,
             "maxima": self.maxima, "details": self.details}
        return json.dumps(_jsonable(d), indent=2, sort_keys=True)

    def to_text(self, wall: float) -> str:
        lines = [f"cartanlab {self.command}"]
        for i in self.inputs:
            lines.append(f"  input  {i['path']}  sha256:{i['sha256'][:16]}")
        if self.seed is not None:
            lines.append(f"  seed   {self.seed}")
        for k, v in self.details.items():
            if isinstance(v, str) and "\n" in v:
                lines.append(f"  {k}:")
                lines += ["    " + ln for ln in v.rstrip().splitlines()]
            else:
                lines.append(f"  {k}: {_fmt(v)}")
        for k, v in self.maxima.items():
            lines.append(f"  max {k}: {v:.3e}")
        for v in self.verdicts:
            w = f"  witness {_fmt(v['witness'])}" if v["witness"] is not None else ""
            lines.append(f"{v['status']:<9}{v['name']}{w}")
        lines.append(f"  wall time {wall:.3f} s")
        return "\n".join(lines)


def _fmt(v) -> str:
    return json.dumps(_jsonable(v)) if not isinstance(v, str) else v


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return str(x)
    return x


def _names(alg, idx):
    return [alg.basis_names[i] for i in idx]


def _sc_table(alg) -> dict[str, list[str]]:
    return {f"[{alg.basis_names[j]},{alg.basis_names[k]}]": [str(c) for c in v]
            for (j, k), v in sorted(alg.brackets().items())}


# --------------------------------------------------------------------------
# commands

def cmd_check_algebra(args, rep: Report):
    inputs: list[Source] = []
    alg = load_algebra(args.file, inputs)
    rep.add_inputs(inputs)
    rep.details.update(name=alg.name, dim=alg.dim, basis=list(alg.basis_names), brackets=_sc_table(alg))
    w = jacobi_witness(alg)
    rep.check("antisymmetry", True)
    rep.check("jacobi", w is None, None if w is None else _names(alg, w))


def cmd_check_extension(args, rep: Report, mode: str = "full"):
    le = load_extension(args.file)
    rep.add_inputs(le.inputs)
    cte, sp = le.cte, le.splitting
    ex_rep = check_exact(cte.ext)
    rep.details.update(dims={"h": cte.ext.h_dim, "z": cte.ext.z_dim, "V": cte.ext.v_dim})
    rep.check("exact", ex_rep.passed, ex_rep.failures)
    if mode == "exact":
        return
    red = check_reductive(cte, sp)
    wit = None
    if not red:
        wit = {"morphism_pair": red.morphism_witness, "action_pair": red.action_witness}
    rep.check("reductive", red.reductive, wit)
    jw = jacobi_witness(cte.z)
    rep.details["z_jacobi"] = "holds" if jw is None else f"fails on basis triple {list(_names(cte.z, jw))}"
    if red.reductive:
        rep.check("semidirect_iso", semidirect_iso_check(cte, sp))


def cmd_extract_bracket(args, rep: Report):
    le = load_extension(args.file)
    rep.add_inputs(le.inputs)
    red = check_reductive(le.cte, le.splitting)
    rep.check("reductive", red.reductive,
              None if red else {"morphism_pair": red.morphism_witness, "action_pair": red.action_witness})
    if red:
        k = induced_quotient_bracket(le.cte, le.splitting)
        rep.details["k_brackets"] = _sc_table(k)
        rep.details["k_toml"] = algebra_to_toml(k)


def cmd_tower(args, rep: Report):
    lp = load_pfaffian(args.file)
    rep.add_inputs(lp.inputs)
    try:
        h = symbol_ideal(lp.data)
    except EquivarianceViolated as e:
        rep.check("equivariance", False, {"basis_index": e.basis_index})
        return
    rep.check("equivariance", True)
    t = reduction_tower(lp.data)
    rep.details.update(
        g_dim=lp.data.g.dim, V_dim=lp.data.V_dim, h_dim=h.dim,
        stages=[{"g_dim": s.g.dim, "V_dim": s.V_dim, "W_dim": s.W_dim, "kernel_dim": s.kernel_dim} for s in t.stages],
        order=t.order)


def cmd_check_flatness(args, rep: Report):
    ls = load_scenario(args.file)
    rep.add_inputs(ls.inputs)
    sc = ls.scenario
    fr = flatness_check(sc, threads=args.threads)
    rep.details.update(scenario=sc.name, grid_points=fr.points, fd_step=sc.box.fd_step, tol=fr.tol,
                       worst_point=fr.worst_point, worst_component=fr.worst_component, worst_T=fr.worst_T,
                       z_jacobi="holds" if fr.z_is_lie else "fails")
    rep.maxima.update(R=fr.max_R, torsion_residual=fr.max_torsion_residual)
    cr = curvature(canonical_lift(sc.tau, sc.theta), sc.z, sc.box, h_dim=sc.h.dim, threads=args.threads)
    rep.maxima["curvature"] = cr.max_norm
    witness = None
    if not fr.flat:
        witness = {"component": fr.worst_component, "T": fr.worst_T, "point": fr.worst_point}
    rep.verdict("flatness", fr.verdict, witness)


def cmd_check_integrability(args, rep: Report):
    ls = load_scenario(args.file)
    rep.add_inputs(ls.inputs)
    sc = ls.scenario
    if sc.frames is None:
        raise InputError(f"{args.file}: scenario has no [frames] table")
    ir = k_integrability_witness(sc.frames, sc.k, sc.box, threads=args.threads)
    rep.details.update(scenario=sc.name, grid_points=ir.points, tol=ir.tol, worst_point=ir.worst_point)
    rep.maxima["bracket_residual"] = ir.max_residual
    rep.verdict("k_integrability", ir.verdict, None if ir.passed else {"pair": ir.witness})


def cmd_split_check(args, rep: Report):
    ls = load_scenario(args.file)
    rep.add_inputs(ls.inputs)
    sc = ls.scenario
    sr = curvature_split_check(sc.tau, sc.theta, sc.h, sc.k, sc.rep, sc.box, threads=args.threads)
    rep.details.update(scenario=sc.name, grid_points=sr.points, split_tol=SPLIT_TOL)
    rep.maxima["split_discrepancy"] = sr.max_discrepancy
    rep.check("curvature_split", sr.ok(SPLIT_TOL), {"point": sr.worst_point})
    if ls.second_order:
        so = ls.second_order
        model = second_order_model(so["n"])
        r2 = second_order_split_check(so["tau2"], so["tau1"], so["theta1"], model, sc.box, threads=args.threads)
        rep.maxima["second_order_discrepancy"] = r2.max_discrepancy
        rep.maxima["second_order_naive_discrepancy"] = r2.naive_discrepancy
        rep.check("second_order_split", r2.ok(SPLIT_TOL), {"point": r2.worst_point})


def cmd_groupoid_check(args, rep: Report):
    model, size, iso = args.model, None, None
    samples, bis = args.samples, args.bisections
    if args.file:
        cfg, srcs = load_groupoid(args.file)
        rep.add_inputs(srcs)
        model, size, iso = cfg.model, cfg.size, cfg.isotropy
        samples = samples or cfg.samples
        bis = bis or cfg.bisections
        if cfg.seed is not None and args.seed is None and "CARTANLAB_SEED" not in os.environ:
            rep.seed = int(cfg.seed)
    if model is None:
        raise InputError("give a groupoid file or --model")
    if model == "translations":
        size = args.n or size or 2
    else:
        size = args.k or size or 1
    samples = samples or 200
    bis = bis or 20
    act = FreeTransitiveAction(model, size)
    if iso is None:
        iso = f"builtin:gl({act.dim})" if model == "translations" else f"builtin:sp({size},1)"
    g = load_algebra_ref(iso, None)
    if not isinstance(g, MatrixAlgebra) or g.n != act.dim:
        raise InputError(f"isotropy algebra must be a matrix algebra on R^{act.dim}")
    g_mats = [np.array(la.to_float(m)) for m in g.matrices]
    rng = np.random.default_rng(rep.seed)
    rep.details.update(model=model, size=size, isotropy=iso, samples=samples, bisections=bis)
    d_res = divisor_identity_residual(act, rng, 1000)
    a_res = groupoid_axiom_residual(act, g_mats, rng, samples)
    pts = rng.uniform(-1, 1, (27, act.dim))
    h_res = max(holonomic_bisection_residual(act, act.random_element(rng), pts) for _ in range(bis))
    mr = multiplicativity_residual(act, g_mats, rng, samples)
    rep.maxima.update(divisor=d_res, axioms=a_res, holonomic=h_res, multiplicativity=mr.max_defect,
                      multiplicativity_orbit_form=mr.max_literal_defect)
    rep.check("divisor_identities", d_res <= DIVISOR_TOL, d_res)
    rep.check("groupoid_axioms", a_res <= AXIOM_TOL, a_res)
    rep.check("holonomic_bisections", h_res <= HOLONOMIC_TOL, h_res)
    rep.check("multiplicativity", mr.max_defect <= MULT_TOL, mr.max_defect)
    ind = build_reductive_extension(act, g.algebra, g.matrices)
    rep.details["extension_exact"] = ind.exact
    if ind.exact:
        rep.details["k_brackets"] = _sc_table(ind.k)
        rep.details["z_jacobi"] = "holds" if ind.z_is_lie else "fails"
        rep.check("induced_extension_reductive", bool(ind.reductive))
    else:
        rep.check("induced_extension_reductive", False, "structure constants did not snap to rationals")


def cmd_catalog(args, rep: Report):
    entries = []
    for name in catalog_names():
        src = open_source(f"catalog:{name}")
        entries.append({"name": name, "kind": kind_of(src), "sha256": src.sha256})
    rep.details["entries"] = entries
    if not args.json:
        rep.details = {"entries": "\n".join(f"{e['name']:<24}{e['kind']:<11}{e['sha256'][:16]}" for e in entries)}


COMMANDS: dict[str, Callable] = {
    "check-algebra": cmd_check_algebra,
    "check-extension": cmd_check_extension,
    "check-exact": lambda a, r: cmd_check_extension(a, r, "exact"),
    "check-reductive": lambda a, r: cmd_check_extension(a, r, "reductive"),
    "extract-bracket": cmd_extract_bracket,
    "tower": cmd_tower,
    "check-flatness": cmd_check_flatness,
    "check-integrability": cmd_check_integrability,
    "split-check": cmd_split_check,
    "groupoid-check": cmd_groupoid_check,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--threads", type=int, default=1, help="worker threads for grid sweeps")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $CARTANLAB_SEED or 0)")
    p = argparse.ArgumentParser(prog="cartanlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "check-algebra": "antisymmetry and Jacobi for an algebra file",
        "check-extension": "exactness, reductivity and the semidirect isomorphism",
        "check-exact": "exactness of an extension only",
        "check-reductive": "exactness and reductivity of an extension",
        "extract-bracket": "induced bracket on V of a reductive extension",
        "tower": "symbol ideal and reduction tower of Pfaffian data",
        "check-flatness": "torsion/curvature flatness verdict for a scenario",
        "check-integrability": "frame brackets against the structure constants of k",
        "split-check": "curvature decomposition identities on a scenario",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("file", help="TOML file, catalog:<name> or a bare catalog name")
    g = sub.add_parser("groupoid-check", parents=[common], help="groupoid and Pfaffian-form identities")
    g.add_argument("file", nargs="?", help="optional groupoid TOML")
    g.add_argument("--model", choices=["translations", "heisenberg"])
    g.add_argument("--n", type=int, help="dimension for translations")
    g.add_argument("--k", type=int, help="Heisenberg parameter (dimension 2k+1)")
    g.add_argument("--samples", type=int, default=None)
    g.add_argument("--bisections", type=int, default=None)
    sub.add_parser("catalog", parents=[common], help="list bundled files")
    return p


def resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("CARTANLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"CARTANLAB_SEED must be an integer, got {env!r}") from None
    return 0


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    rep = Report(args.command)
    t0 = time.perf_counter()
    try:
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        rep.seed = resolve_seed(args.seed)
        COMMANDS[args.command](args, rep)
    except (InputError, SingularCoframe, DegenerateFrame) as e:
        print(f"cartanlab: error: {e}", file=err)
        return 2
    wall = time.perf_counter() - t0
    print(rep.to_json() if args.json else rep.to_text(wall), file=out)
    return 1 if rep.failed else 0


def main() -> None:
    sys.exit(run())
