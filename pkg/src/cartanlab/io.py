"""TOML loaders for algebras, extensions, Pfaffian data, scenarios and groupoid runs.

References to other algebras are either ``builtin:<name>`` (see
:func:`cartanlab.algebras.builtin`), ``catalog:<name>`` or a path relative to
the referring file.
"""
from __future__ import annotations

import hashlib
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import linalg as la
from .algebra import AlmostLieAlgebra, LinearRep
from .algebras import MatrixAlgebra, builtin
from .coframe import ChartBox, FrameField, Scenario, VForm1
from .expr import ExprSyntaxError, UnknownIdentifier
from .extensions import (CartanTypeExtension, PfaffianGroupData, RepExtension, SplittingPair,
                         canonical_extension, complete_splitting, second_order_model)

CATALOG_PACKAGE = "cartanlab.catalog"
CATALOG = "catalog"


class InputError(ValueError):
    pass


@dataclass
class Source:
    label: str              # path as given, or catalog:<name>
    text: str
    base: Path | str | None   # directory for relative references, or CATALOG

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()


def catalog_names() -> list[str]:
    files = resources.files(CATALOG_PACKAGE)
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".toml"))


def open_source(ref: str, base: Path | str | None = None) -> Source:
    if ref.startswith("catalog:"):
        name = ref[len("catalog:"):]
        res = resources.files(CATALOG_PACKAGE) / f"{name}.toml"
        if not res.is_file():
            raise InputError(f"no catalog entry named {name!r}")
        return Source(ref, res.read_text(encoding="utf-8"), CATALOG)
    if base == CATALOG:
        return open_source(f"catalog:{Path(ref).stem}")
    p = Path(ref)
    if base is not None and not p.is_absolute():
        p = base / p
    if not p.is_file():
        if base is None and "/" not in ref and not ref.endswith(".toml") and ref in catalog_names():
            return open_source(f"catalog:{ref}")
        raise InputError(f"cannot read {ref!r}")
    return Source(ref, p.read_text(encoding="utf-8"), p.parent)


def read_toml(src: Source) -> dict:
    try:
        return tomllib.loads(src.text)
    except tomllib.TOMLDecodeError as e:
        raise InputError(f"{src.label}: {e}") from None


def _get(d: dict, key: str, where: str):
    if key not in d:
        raise InputError(f"{where}: missing key {key!r}")
    return d[key]


def _frac(x, where: str) -> Fraction:
    if isinstance(x, float):
        raise InputError(f"{where}: write rationals as integers or strings like \"1/2\", not floats")
    try:
        return la.to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"{where}: not a rational number: {x!r}") from None


def _matrix(rows, where: str, shape: tuple[int, int] | None = None) -> la.Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    m = tuple(tuple(_frac(x, where) for x in r) for r in rows)
    if len({len(r) for r in m}) > 1:
        raise InputError(f"{where}: ragged matrix")
    if shape is not None:
        nr, nc = shape
        if len(m) != nr or (nr and len(m[0]) != nc):
            raise InputError(f"{where}: expected a {nr}x{nc} matrix")
        if nr == 0:
            return ()
    return m


# --------------------------------------------------------------------------
# algebras

def _bracket_table(entries, dim: int, names, where: str) -> dict:
    def index(v, what):
        if isinstance(v, str) and v in names:
            return names.index(v)
        if isinstance(v, int) and not isinstance(v, bool) and 1 <= v <= dim:
            return v - 1
        raise InputError(f"{where}: bad {what} index {v!r}")
    table: dict[tuple[int, int], la.Vector] = {}
    for n_entry, b in enumerate(entries):
        w = f"{where} entry {n_entry + 1}"
        j, k = index(_get(b, "j", w), "j"), index(_get(b, "k", w), "k")
        vec = [Fraction(0)] * dim
        for term in _get(b, "result", w):
            i = index(_get(term, "i", w), "i")
            vec[i] += _frac(term.get("coeff", 1), w)
        if (j, k) in table:
            raise InputError(f"{w}: pair ({j + 1}, {k + 1}) given twice")
        if j == k and any(vec):
            raise InputError(f"{w}: [e{j + 1}, e{j + 1}] must vanish")
        if (k, j) in table and table[(k, j)] != tuple(-x for x in vec):
            raise InputError(f"{w}: entries for ({j + 1},{k + 1}) and ({k + 1},{j + 1}) conflict")
        table[(j, k)] = tuple(vec)
    return table


def algebra_from_dict(d: dict, where: str = "algebra") -> AlmostLieAlgebra | MatrixAlgebra:
    head = _get(d, "algebra", where)
    if "builtin" in head:
        try:
            return builtin(head["builtin"])
        except (ValueError, TypeError) as e:
            raise InputError(f"{where}: {e}") from None
    dim = _get(head, "dim", where)
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"{where}: dim must be a positive integer")
    names = list(head.get("basis", [f"e{i + 1}" for i in range(dim)]))
    if len(names) != dim or len(set(names)) != dim:
        raise InputError(f"{where}: basis must list {dim} distinct names")
    table = _bracket_table(d.get("bracket", []), dim, names, where)
    return AlmostLieAlgebra.from_brackets(dim, {jk: v for jk, v in table.items()}, basis_names=names,
                                          name=head.get("name", ""))


def load_algebra_ref(ref: str, base: Path | str | None, inputs: list[Source] | None = None):
    """Algebra (or MatrixAlgebra) from builtin:/catalog:/path references."""
    if ref.startswith("builtin:"):
        try:
            return builtin(ref[len("builtin:"):])
        except (ValueError, TypeError) as e:
            raise InputError(str(e)) from None
    src = open_source(ref, base)
    if inputs is not None:
        inputs.append(src)
    return algebra_from_dict(read_toml(src), src.label)


def load_algebra(ref: str, inputs: list[Source] | None = None) -> AlmostLieAlgebra:
    a = load_algebra_ref(ref, None, inputs)
    return a.algebra if isinstance(a, MatrixAlgebra) else a


def _plain(a) -> AlmostLieAlgebra:
    return a.algebra if isinstance(a, MatrixAlgebra) else a


def _rep(desc, acting, space_dim: int, where: str) -> LinearRep:
    alg = _plain(acting)
    if desc == "standard":
        if not isinstance(acting, MatrixAlgebra):
            raise InputError(f"{where}: 'standard' needs a matrix algebra")
        rep = acting.standard_rep
    elif desc == "trivial":
        rep = LinearRep.trivial(alg, space_dim)
    elif isinstance(desc, list):
        if len(desc) != alg.dim:
            raise InputError(f"{where}: need {alg.dim} matrices, got {len(desc)}")
        rep = LinearRep(alg, space_dim, tuple(_matrix(m, where, (space_dim, space_dim)) for m in desc))
    else:
        raise InputError(f"{where}: rep must be 'standard', 'trivial' or a list of matrices")
    if rep.space_dim != space_dim:
        raise InputError(f"{where}: representation acts on dimension {rep.space_dim}, expected {space_dim}")
    return rep


# --------------------------------------------------------------------------
# extensions and Pfaffian data

_SECOND = re.compile(r"^\s*second_order\s*\(\s*(\d+)\s*\)\s*$")
_EUCLID = re.compile(r"^\s*euclidean\s*\(\s*(\d+)\s*\)\s*$")


@dataclass
class LoadedExtension:
    cte: CartanTypeExtension
    splitting: SplittingPair
    inputs: list[Source] = field(default_factory=list)


def load_extension(ref: str) -> LoadedExtension:
    src = open_source(ref)
    inputs = [src]
    d = read_toml(src)
    w = src.label
    e = _get(d, "extension", w)
    if "builtin" in e:
        m = _SECOND.match(str(e["builtin"]))
        if not m:
            raise InputError(f"{w}: unknown builtin extension {e['builtin']!r}")
        model = second_order_model(int(m.group(1)))
        return LoadedExtension(model.cte, model.splitting, inputs)
    h = load_algebra_ref(_get(e, "h_algebra", w), src.base, inputs)
    k = load_algebra_ref(_get(e, "k_algebra", w), src.base, inputs)
    hp, kp = _plain(h), _plain(k)
    action = _rep(e.get("h_action", "standard"), h, kp.dim, f"{w}: h_action")
    try:
        cte0, sp0 = canonical_extension(hp, action, kp)
    except ValueError as err:
        raise InputError(f"{w}: {err}") from None
    zd = hp.dim + kp.dim
    i = _matrix(e["i"], f"{w}: i", (zd, hp.dim)) if "i" in e else cte0.ext.i
    p = _matrix(e["p"], f"{w}: p", (kp.dim, zd)) if "p" in e else cte0.ext.p
    if "z_bracket" in d:
        names = [f"z{a + 1}" for a in range(zd)]
        z = AlmostLieAlgebra.from_brackets(zd, _bracket_table(d["z_bracket"], zd, names, f"{w}: z_bracket"),
                                           basis_names=names, name="z")
    else:
        z = cte0.z
    ext = RepExtension(hp.dim, zd, kp.dim, i, p)
    try:
        cte = CartanTypeExtension(ext, z, hp, action)
        if "l" in e:
            sp = complete_splitting(ext, l=_matrix(e["l"], f"{w}: l", (hp.dim, zd)))
        elif "r" in e:
            sp = complete_splitting(ext, r=_matrix(e["r"], f"{w}: r", (zd, kp.dim)))
        else:
            sp = sp0 if (i, p) == (cte0.ext.i, cte0.ext.p) else complete_splitting(ext, l=sp0.l)
    except ValueError as err:
        raise InputError(f"{w}: {err}") from None
    return LoadedExtension(cte, sp, inputs)


@dataclass
class LoadedPfaffian:
    data: PfaffianGroupData
    inputs: list[Source]


def load_pfaffian(ref: str) -> LoadedPfaffian:
    src = open_source(ref)
    inputs = [src]
    d = read_toml(src)
    w = src.label
    pf = _get(d, "pfaffian", w)
    if "builtin" in pf:
        desc = str(pf["builtin"])
        if (m := _SECOND.match(desc)):
            return LoadedPfaffian(second_order_model(int(m.group(1))).pfaffian, inputs)
        if (m := _EUCLID.match(desc)):
            from .algebras import euclidean_model
            g, rho, l = euclidean_model(int(m.group(1)))
            return LoadedPfaffian(PfaffianGroupData(g, rho.space_dim, rho, l), inputs)
        raise InputError(f"{w}: unknown builtin Pfaffian data {desc!r}")
    g = load_algebra_ref(_get(pf, "g_algebra", w), src.base, inputs)
    gp = _plain(g)
    V = pf.get("V_dim")
    rho_desc = pf.get("rho", "standard")
    if V is None:
        V = g.n if isinstance(g, MatrixAlgebra) and rho_desc == "standard" else None
    if not isinstance(V, int) or V < 1:
        raise InputError(f"{w}: V_dim must be a positive integer")
    rho = _rep(rho_desc, g, V, f"{w}: rho")
    l = _matrix(pf["l"], f"{w}: l", (V, gp.dim)) if "l" in pf else la.zeros(V, gp.dim)
    return LoadedPfaffian(PfaffianGroupData(gp, V, rho, l), inputs)


# --------------------------------------------------------------------------
# scenarios

@dataclass
class LoadedScenario:
    scenario: Scenario
    inputs: list[Source]
    second_order: dict | None = None


def _rows(table: dict, key: str, where: str):
    rows = _get(table, key, where)
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{where}: {key} must be a list of rows")
    return [[str(x) for x in r] for r in rows]


def _form(rows, coords, where) -> VForm1:
    try:
        return VForm1.parse(rows, coords)
    except (ExprSyntaxError, UnknownIdentifier) as e:
        raise InputError(f"{where}: {e}") from None
    except ValueError as e:
        raise InputError(f"{where}: {e}") from None


def load_scenario(ref: str) -> LoadedScenario:
    src = open_source(ref)
    inputs = [src]
    d = read_toml(src)
    w = src.label
    chart = _get(d, "chart", w)
    coords = tuple(_get(chart, "coords", f"{w} [chart]"))
    n = len(coords)

    def bounds(key, default):
        v = chart.get(key, default)
        v = [v] * n if isinstance(v, (int, float)) else v
        if len(v) != n:
            raise InputError(f"{w} [chart]: {key} needs {n} entries")
        return tuple(float(x) for x in v)
    try:
        box = ChartBox(coords, bounds("lo", -1.0), bounds("hi", 1.0), int(chart.get("grid", 9)),
                       float(chart.get("fd_step", 1e-4)), float(chart.get("tol", 1e-6)))
    except ValueError as e:
        raise InputError(f"{w} [chart]: {e}") from None
    model = _get(d, "model", w)
    h = load_algebra_ref(_get(model, "h_algebra", f"{w} [model]"), src.base, inputs)
    k = load_algebra_ref(_get(model, "k_algebra", f"{w} [model]"), src.base, inputs)
    rep = _rep(model.get("rep", "standard"), h, _plain(k).dim, f"{w} [model] rep")
    theta = _form(_rows(_get(d, "coframe", w), "rows", f"{w} [coframe]"), coords, f"{w} [coframe]")
    conn = d.get("connection")
    tau = _form(_rows(conn, "rows", f"{w} [connection]"), coords, f"{w} [connection]") if conn and "rows" in conn \
        else VForm1.zero(_plain(h).dim, coords)
    frames = None
    if "frames" in d:
        try:
            frames = FrameField.parse(_rows(d["frames"], "fields", f"{w} [frames]"), coords)
        except (ExprSyntaxError, UnknownIdentifier) as e:
            raise InputError(f"{w} [frames]: {e}") from None
    try:
        sc = Scenario(d.get("scenario", {}).get("name", w), box, theta, tau, _plain(h), _plain(k), rep, frames)
    except ValueError as e:
        raise InputError(f"{w}: {e}") from None
    so = None
    if "second_order" in d:
        t = d["second_order"]
        so = {"n": int(_get(t, "n", f"{w} [second_order]"))}
        for key in ("tau2", "tau1", "theta1"):
            so[key] = _form(_rows(t, key, f"{w} [second_order]"), coords, f"{w} [second_order]")
    return LoadedScenario(sc, inputs, so)


# --------------------------------------------------------------------------
# groupoid runs

@dataclass
class GroupoidConfig:
    model: str
    size: int
    isotropy: str | None
    samples: int = 200
    bisections: int = 20
    seed: int | None = None


def load_groupoid(ref: str) -> tuple[GroupoidConfig, list[Source]]:
    src = open_source(ref)
    d = read_toml(src)
    w = src.label
    g = _get(d, "groupoid", w)
    model = _get(g, "model", w)
    if model not in ("translations", "heisenberg"):
        raise InputError(f"{w}: model must be translations or heisenberg")
    size = int(g.get("n" if model == "translations" else "k", 1))
    return GroupoidConfig(model, size, g.get("isotropy"), int(g.get("samples", 200)),
                        int(g.get("bisections", 20)), g.get("seed")), [src]


def kind_of(src: Source) -> str:
    d = read_toml(src)
    for key in ("algebra", "extension", "pfaffian", "groupoid", "chart"):
        if key in d:
            return "scenario" if key == "chart" else key
    return "unknown"


def algebra_to_toml(alg: AlmostLieAlgebra) -> str:
    lines = ["[algebra]", f'name = "{alg.name}"', f"dim = {alg.dim}",
             "basis = [" + ", ".join(f'"{b}"' for b in alg.basis_names) + "]"]
    for (j, k), v in sorted(alg.brackets().items()):
        terms = ", ".join(f'{{i = {i + 1}, coeff = "{c}"}}' for i, c in enumerate(v) if c)
        lines += ["", "[[bracket]]", f"j = {j + 1}", f"k = {k + 1}", f"result = [{terms}]"]
    return "\n".join(lines) + "\n"

