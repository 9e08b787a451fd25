"""Catalog of concrete algebras: gl, sl, so, sp(k,1), Heisenberg, abelian.

Matrix algebras keep their defining matrices so the standard representation
is available alongside the structure constants.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .algebra import AlmostLieAlgebra, LinearRep
from .linalg import Matrix


@dataclass(frozen=True)
class MatrixAlgebra:
    algebra: AlmostLieAlgebra
    matrices: tuple[Matrix, ...]

    @property
    def standard_rep(self) -> LinearRep:
        n = len(self.matrices[0]) if self.matrices else 0
        return LinearRep(self.algebra, n, self.matrices)

    @property
    def n(self) -> int:
        return len(self.matrices[0]) if self.matrices else 0


def _e(n: int, i: int, j: int) -> Matrix:
    return tuple(tuple(Fraction(int(r == i and c == j)) for c in range(n)) for r in range(n))


def matrix_algebra(mats: Sequence[Matrix], names: Sequence[str], name: str = "") -> MatrixAlgebra:
    """Structure constants of span(mats) under the commutator, solved exactly."""
    mats = tuple(la.mat(m) for m in mats)
    d = len(mats)
    flat = [tuple(x for row in m for x in row) for m in mats]
    if flat and la.rank(tuple(flat)) != d:
        raise ValueError("matrices are linearly dependent")
    cols = la.from_columns(flat, len(flat[0])) if flat else ()
    brackets = {}
    for a, b in combinations(range(d), 2):
        c = la.commutator(mats[a], mats[b])
        x = la.solve(cols, tuple(v for row in c for v in row), d)
        if x is None:
            raise ValueError(f"span not closed under commutator: [{names[a]}, {names[b]}]")
        if not la.is_zero(x):
            brackets[(a, b)] = x
    return MatrixAlgebra(AlmostLieAlgebra.from_brackets(d, brackets, basis_names=names, name=name), mats)


def gl(n: int) -> MatrixAlgebra:
    mats, names = [], []
    for i in range(n):
        for j in range(n):
            mats.append(_e(n, i, j))
            names.append(f"E{i + 1}{j + 1}")
    return matrix_algebra(mats, names, f"gl{n}")


def sl(n: int) -> MatrixAlgebra:
    mats, names = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                mats.append(_e(n, i, j))
                names.append(f"E{i + 1}{j + 1}")
    for i in range(n - 1):
        mats.append(la.sub(_e(n, i, i), _e(n, i + 1, i + 1)))
        names.append(f"H{i + 1}")
    return matrix_algebra(mats, names, f"sl{n}")


def so(n: int) -> MatrixAlgebra:
    mats, names = [], []
    for i, j in combinations(range(n), 2):
        mats.append(la.sub(_e(n, i, j), _e(n, j, i)))
        names.append(f"L{i + 1}{j + 1}")
    return matrix_algebra(mats, names, f"so{n}")


def _sp_blocks(k: int) -> list[tuple[Matrix, str]]:
    """Basis of sp(k) = {a : a^T J + J a = 0}, J = [[0, I], [-I, 0]], as [[P, Q], [R, -P^T]]."""
    n = 2 * k
    out = []
    for i in range(k):
        for j in range(k):
            out.append((la.sub(_e(n, i, j), _e(n, k + j, k + i)), f"P{i + 1}{j + 1}"))
    for i in range(k):
        for j in range(i, k):
            q = _e(n, i, k + j) if i == j else la.add(_e(n, i, k + j), _e(n, j, k + i))
            r = _e(n, k + i, j) if i == j else la.add(_e(n, k + i, j), _e(n, k + j, i))
            out.append((q, f"Q{i + 1}{j + 1}"))
            out.append((r, f"R{i + 1}{j + 1}"))
    return out


def symplectic_form(k: int) -> Matrix:
    n = 2 * k
    return tuple(tuple(Fraction(1 if c == r + k else -1 if r == c + k else 0) for c in range(n)) for r in range(n))


def sp(k: int) -> MatrixAlgebra:
    blocks = _sp_blocks(k)
    return matrix_algebra([m for m, _ in blocks], [s for _, s in blocks], f"sp{k}")


def sp_k1(k: int) -> MatrixAlgebra:
    """Block upper-triangular (2k+1)-matrices [[a, b], [0, c]] with a in sp(k).

    These preserve the hyperplane of the first 2k coordinates and the
    symplectic form on it.
    """
    n = 2 * k + 1
    mats, names = [], []
    for a, s in _sp_blocks(k):
        mats.append(tuple(tuple(a[r][c] if r < n - 1 and c < n - 1 else Fraction(0) for c in range(n))
                          for r in range(n)))
        names.append(s)
    for i in range(2 * k):
        mats.append(_e(n, i, n - 1))
        names.append(f"b{i + 1}")
    mats.append(_e(n, n - 1, n - 1))
    names.append("c")
    return matrix_algebra(mats, names, f"sp({k},1)")


def heisenberg(k: int = 1) -> AlmostLieAlgebra:
    """Basis a_1..a_k, b_1..b_k, c with [a_i, b_i] = c, from the group law z + z' + <x, y'>."""
    n = 2 * k + 1
    brackets = {(i, k + i): la.unit(n, n - 1) for i in range(k)}
    names = [f"a{i + 1}" for i in range(k)] + [f"b{i + 1}" for i in range(k)] + ["c"]
    if k == 1:
        names = ["x", "y", "z"]
    return AlmostLieAlgebra.from_brackets(n, brackets, basis_names=names, name=f"hei{n}")


def euclidean_model(n: int):
    """so(n) acting on V = so(n) + R^n by the adjoint of e(n); l is the inclusion of so(n)."""
    from .algebra import adjoint_rep, semidirect
    s = so(n)
    e = semidirect(s.algebra, s.standard_rep, AlmostLieAlgebra.abelian(n), name=f"e{n}")
    ad = adjoint_rep(e)
    d = s.algebra.dim
    rho = LinearRep(s.algebra, e.dim, ad.matrices[:d])
    l = tuple(tuple(Fraction(int(r == c)) for c in range(d)) for r in range(e.dim))
    return s.algebra, rho, l


_BUILTIN = re.compile(r"^\s*(\w+)\s*(?:\(\s*([0-9,\s]*)\s*\))?\s*$")


def builtin(desc: str):
    """Resolve names like ``hei(1)``, ``gl(2)``, ``so(3)``, ``sp(1,1)``, ``jet2(2)``, ``abelian(3)``.

    Returns a MatrixAlgebra when the algebra has a defining representation,
    otherwise an AlmostLieAlgebra.
    """
    m = _BUILTIN.match(desc)
    if not m:
        raise ValueError(f"bad builtin algebra name: {desc!r}")
    kind = m.group(1).lower()
    args = [int(a) for a in (m.group(2) or "").replace(" ", "").split(",") if a]
    if kind in ("hei", "heisenberg"):
        return heisenberg(*(args or [1]))
    if kind == "hei3":
        return heisenberg(1)
    if kind in ("abelian", "ab"):
        return AlmostLieAlgebra.abelian(*args)
    if kind == "gl":
        return gl(*args)
    if kind == "sl":
        return sl(*args)
    if kind == "so":
        return so(*args)
    if kind == "sp" and len(args) == 2 and args[1] == 1:
        return sp_k1(args[0])
    if kind == "sp" and len(args) == 1:
        return sp(args[0])
    if kind == "jet2":
        from .extensions import jet2_algebra
        return jet2_algebra(*args)
    raise ValueError(f"unknown builtin algebra: {desc!r}")
