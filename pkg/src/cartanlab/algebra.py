"""Finite-dimensional almost Lie algebras with exact structure constants.

Convention, used everywhere in the package::

    [e_j, e_k] = sum_i d^i_jk e_i        stored as sc[i][j][k]

Jacobi is *not* required; :func:`is_lie` decides it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Mapping, Sequence

from . import linalg as la
from .linalg import Matrix, Vector


class DimensionMismatch(ValueError):
    pass


class NotAnIdeal(ValueError):
    pass


class AntisymmetryError(ValueError):
    pass


def _check_len(v: Sequence, n: int, what: str = "vector") -> Vector:
    if len(v) != n:
        raise DimensionMismatch(f"{what} has length {len(v)}, expected {n}")
    return la.vec(v)


@dataclass(frozen=True, eq=False)
class AlmostLieAlgebra:
    """Bilinear antisymmetric bracket on a basis ``basis_names``."""

    dim: int
    basis_names: tuple[str, ...]
    sc: tuple[tuple[tuple[Fraction, ...], ...], ...]
    name: str = ""

    def __post_init__(self):
        if len(self.basis_names) != self.dim:
            raise DimensionMismatch("basis_names must have length dim")
        if len(self.sc) != self.dim or any(len(m) != self.dim or any(len(r) != self.dim for r in m) for m in self.sc):
            raise DimensionMismatch("structure constants must be dim x dim x dim")
        for i, j, k in product(range(self.dim), repeat=3):
            if self.sc[i][j][k] != -self.sc[i][k][j]:
                raise AntisymmetryError(
                    f"d^{i}_{j}{k} = {self.sc[i][j][k]} but d^{i}_{k}{j} = {self.sc[i][k][j]}")

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence], *,
                      basis_names: Sequence[str] | None = None, name: str = "") -> "AlmostLieAlgebra":
        """Build from ``{(j, k): [e_j, e_k]}`` (0-based); the (k, j) entries are implied.

        Conflicting explicit entries for (j, k) and (k, j) raise AntisymmetryError.
        """
        table: dict[tuple[int, int], Vector] = {}
        for (j, k), v in brackets.items():
            v = _check_len(v, dim, f"[e{j}, e{k}]")
            if j == k:
                if not la.is_zero(v):
                    raise AntisymmetryError(f"[e{j}, e{j}] must vanish")
                continue
            neg = la.vscale(-1, v)
            if (k, j) in table and table[(k, j)] != neg:
                raise AntisymmetryError(f"entries for ({j},{k}) and ({k},{j}) are not opposite")
            table[(j, k)] = v
            table[(k, j)] = neg
        zero = Fraction(0)
        sc = tuple(
            tuple(tuple(table[(j, k)][i] if (j, k) in table else zero for k in range(dim)) for j in range(dim))
            for i in range(dim))
        names = tuple(basis_names) if basis_names is not None else tuple(f"e{i + 1}" for i in range(dim))
        return cls(dim, names, sc, name)

    @classmethod
    def abelian(cls, dim: int, name: str = "") -> "AlmostLieAlgebra":
        return cls.from_brackets(dim, {}, name=name or f"ab{dim}")

    @cached_property
    def _table(self) -> dict[tuple[int, int], Vector]:
        out = {}
        for j, k in product(range(self.dim), repeat=2):
            v = tuple(self.sc[i][j][k] for i in range(self.dim))
            if not la.is_zero(v):
                out[(j, k)] = v
        return out

    def basis_bracket(self, j: int, k: int) -> Vector:
        return self._table.get((j, k), (Fraction(0),) * self.dim)

    def brackets(self) -> dict[tuple[int, int], Vector]:
        """Nonzero brackets of basis pairs with j < k."""
        return {jk: v for jk, v in self._table.items() if jk[0] < jk[1]}

    def float_sc(self):
        import numpy as np
        return np.array(la.to_float(self.sc), dtype=float).reshape(self.dim, self.dim, self.dim)

    def __eq__(self, other):
        if not isinstance(other, AlmostLieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.sc == other.sc

    def __hash__(self):
        return hash((self.dim, self.sc))

    def __repr__(self):
        return f"AlmostLieAlgebra({self.name or '?'}, dim={self.dim})"


def bracket(alg: AlmostLieAlgebra, u: Sequence, v: Sequence) -> Vector:
    u = _check_len(u, alg.dim)
    v = _check_len(v, alg.dim)
    out = [Fraction(0)] * alg.dim
    for (j, k), w in alg._table.items():
        c = u[j] * v[k]
        if c:
            for i, wi in enumerate(w):
                if wi:
                    out[i] += c * wi
    return tuple(out)


def jacobiator(alg: AlmostLieAlgebra, u: Sequence, v: Sequence, w: Sequence) -> Vector:
    """[[u,v],w] + [[v,w],u] + [[w,u],v]."""
    b = lambda x, y: bracket(alg, x, y)
    return la.vadd(la.vadd(b(b(u, v), w), b(b(v, w), u)), b(b(w, u), v))


def jacobi_witness(alg: AlmostLieAlgebra) -> tuple[int, int, int] | None:
    """First basis triple (0-based, a<b<c) with nonzero jacobiator."""
    n = alg.dim
    for a, b, c in combinations(range(n), 3):
        if not la.is_zero(jacobiator(alg, la.unit(n, a), la.unit(n, b), la.unit(n, c))):
            return a, b, c
    return None


def is_lie(alg: AlmostLieAlgebra) -> bool:
    # the jacobiator is alternating, so triples with a repeated index vanish
    return jacobi_witness(alg) is None


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        for b in self.basis:
            if len(b) != self.ambient_dim:
                raise DimensionMismatch("basis vector has wrong length")
        if self.basis and la.rank(self.basis) != len(self.basis):
            raise ValueError("subspace basis is not linearly independent")

    @classmethod
    def span(cls, vectors: Sequence[Sequence], ambient_dim: int) -> "Subspace":
        vs = [la.vec(v) for v in vectors]
        return cls(ambient_dim, tuple(la.independent_subset(vs, ambient_dim)))

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, tuple(la.unit(n, i) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        v = _check_len(v, self.ambient_dim)
        if la.is_zero(v):
            return True
        if not self.basis:
            return False
        return la.rank(self.basis + (v,)) == self.dim

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of v in this basis; ValueError if v is outside."""
        cols = la.from_columns(self.basis, self.ambient_dim)
        x = la.solve(cols, la.vec(v), self.dim)
        if x is None:
            raise ValueError("vector not in subspace")
        return x

    def complement(self) -> tuple[Vector, ...]:
        """Standard basis vectors completing this basis (non-pivot columns)."""
        if not self.basis:
            return tuple(la.unit(self.ambient_dim, i) for i in range(self.ambient_dim))
        _, piv = la.rref(self.basis)
        return tuple(la.unit(self.ambient_dim, i) for i in range(self.ambient_dim) if i not in piv)

    def same_as(self, other: "Subspace") -> bool:
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and all(self.contains(b) for b in other.basis))


def is_ideal(alg: AlmostLieAlgebra, s: Subspace) -> bool:
    if s.ambient_dim != alg.dim:
        raise DimensionMismatch("subspace lives in a different ambient space")
    return all(s.contains(bracket(alg, la.unit(alg.dim, a), b))
               for a in range(alg.dim) for b in s.basis)


def kernel_of_linear_map(m: Matrix, ncols: int | None = None) -> Subspace:
    """Null space of an m x n rational matrix (n taken from the rows unless given)."""
    m = la.mat(m)
    n = ncols if ncols is not None else (len(m[0]) if m else 0)
    return Subspace(n, tuple(la.kernel(m, n)))


def image_of_linear_map(m: Matrix, nrows: int) -> Subspace:
    return Subspace.span(la.columns(la.mat(m)) if m and m[0] else [], nrows)


@dataclass(frozen=True)
class LinearRep:
    """Linear action of ``algebra`` on a ``space_dim``-dimensional space.

    ``matrices[j]`` is the action of basis element j. Not necessarily a Lie
    algebra representation; see :meth:`is_representation`.
    """

    algebra: AlmostLieAlgebra
    space_dim: int
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.matrices) != self.algebra.dim:
            raise DimensionMismatch("need one matrix per basis element of the algebra")
        for m in self.matrices:
            if len(m) != self.space_dim or any(len(r) != self.space_dim for r in m):
                raise DimensionMismatch("representation matrix has wrong shape")

    @classmethod
    def of(cls, algebra: AlmostLieAlgebra, matrices: Sequence[Sequence[Sequence]]) -> "LinearRep":
        ms = tuple(la.mat(m) for m in matrices)
        n = len(ms[0]) if ms else 0
        return cls(algebra, n, ms)

    @classmethod
    def trivial(cls, algebra: AlmostLieAlgebra, space_dim: int) -> "LinearRep":
        return cls(algebra, space_dim, tuple(la.zeros(space_dim, space_dim) for _ in range(algebra.dim)))

    def matrix(self, alpha: Sequence) -> Matrix:
        alpha = _check_len(alpha, self.algebra.dim)
        out = la.zeros(self.space_dim, self.space_dim)
        for a, m in zip(alpha, self.matrices):
            if a:
                out = la.add(out, la.scale(a, m))
        return out

    def act(self, alpha: Sequence, v: Sequence) -> Vector:
        return la.matvec(self.matrix(alpha), _check_len(v, self.space_dim))

    def representation_witness(self) -> tuple[int, int] | None:
        g = self.algebra
        for a, b in combinations(range(g.dim), 2):
            lhs = self.matrix(g.basis_bracket(a, b))
            if lhs != la.commutator(self.matrices[a], self.matrices[b]):
                return a, b
        return None

    def is_representation(self) -> bool:
        """rho([a,b]) = [rho(a), rho(b)] on all basis pairs."""
        return self.representation_witness() is None

    def float_matrices(self):
        import numpy as np
        return np.array(la.to_float(self.matrices), dtype=float).reshape(
            self.algebra.dim, self.space_dim, self.space_dim)


def derivation_witness(rep: LinearRep, k: AlmostLieAlgebra) -> tuple[int, int, int] | None:
    """Basis triple (alpha, v, w) breaking rho(alpha)[v,w] = [rho v, w] + [v, rho w]."""
    if rep.space_dim != k.dim:
        raise DimensionMismatch("representation space and k differ in dimension")
    n = k.dim
    for a in range(rep.algebra.dim):
        m = rep.matrices[a]
        for v, w in combinations(range(n), 2):
            lhs = la.matvec(m, k.basis_bracket(v, w))
            rv = tuple(row[v] for row in m)
            rw = tuple(row[w] for row in m)
            rhs = la.vadd(bracket(k, rv, la.unit(n, w)), bracket(k, la.unit(n, v), rw))
            if lhs != rhs:
                return a, v, w
    return None


def is_derivation_action(rep: LinearRep, k: AlmostLieAlgebra) -> bool:
    return derivation_witness(rep, k) is None


def semidirect(g: AlmostLieAlgebra, rep: LinearRep, k: AlmostLieAlgebra, name: str = "") -> AlmostLieAlgebra:
    """g x k with [(a,v),(b,w)] = ([a,b]_g, [v,w]_k + a(w) - b(v)); basis g first, then k."""
    if rep.space_dim != k.dim or rep.algebra.dim != g.dim:
        raise DimensionMismatch("rep must be an action of g on a k-sized space")
    n, m = g.dim, k.dim
    brackets: dict[tuple[int, int], Vector] = {}
    zero_k = (Fraction(0),) * m
    zero_g = (Fraction(0),) * n
    for (a, b), v in g.brackets().items():
        brackets[(a, b)] = v + zero_k
    for a in range(n):
        mat_a = rep.matrices[a]
        for w in range(m):
            col = tuple(row[w] for row in mat_a)
            if not la.is_zero(col):
                brackets[(a, n + w)] = zero_g + col
    for (v, w), u in k.brackets().items():
        brackets[(n + v, n + w)] = zero_g + u
    names = tuple(g.basis_names) + tuple(k.basis_names)
    if len(set(names)) != len(names):
        names = tuple(f"g.{x}" for x in g.basis_names) + tuple(f"k.{x}" for x in k.basis_names)
    return AlmostLieAlgebra.from_brackets(n + m, brackets, basis_names=names,
                                          name=name or f"{g.name}x{k.name}")


def adjoint_rep(alg: AlmostLieAlgebra) -> LinearRep:
    """ad(e_j) has entries (ad e_j)_{ik} = d^i_jk."""
    n = alg.dim
    mats = tuple(tuple(tuple(alg.sc[i][j][k] for k in range(n)) for i in range(n)) for j in range(n))
    return LinearRep(alg, n, mats)


@dataclass(frozen=True)
class Quotient:
    """alg/ideal together with the maps used to build it."""

    algebra: AlmostLieAlgebra
    complement: tuple[Vector, ...]   # lifts of the quotient basis
    projection: Matrix               # alg.dim -> quotient.dim

    def lift(self, q: Sequence) -> Vector:
        out = (Fraction(0),) * len(self.projection[0]) if self.projection else ()
        for c, b in zip(q, self.complement):
            out = la.vadd(out, la.vscale(c, b))
        return out


def _quotient_constants(alg, ideal, comp):
    n_q = len(comp)
    basis = tuple(comp) + ideal.basis
    cols = la.from_columns(basis, alg.dim)
    table = {}
    for a, b in combinations(range(n_q), 2):
        w = bracket(alg, comp[a], comp[b])
        x = la.solve(cols, w, len(basis))
        table[(a, b)] = x[:n_q]
    return table


def quotient(alg: AlmostLieAlgebra, ideal: Subspace) -> Quotient:
    if not is_ideal(alg, ideal):
        raise NotAnIdeal("subspace is not an ideal")
    comp = ideal.complement()
    table = _quotient_constants(alg, ideal, comp)
    if ideal.dim and comp:
        # shifting the complement by ideal elements must not change anything
        shifted = tuple(la.vadd(c, ideal.basis[i % ideal.dim]) for i, c in enumerate(comp))
        if _quotient_constants(alg, ideal, shifted) != table:
            raise AssertionError("quotient bracket depends on the complement")
    n_q = len(comp)
    q = AlmostLieAlgebra.from_brackets(n_q, table, basis_names=[f"[{alg.basis_names[c.index(1)]}]" for c in comp],
                                       name=f"{alg.name}/ideal" if alg.name else "")
    # projection: coordinates along comp after splitting off the ideal
    basis = tuple(comp) + ideal.basis
    cols = la.from_columns(basis, alg.dim)
    proj_cols = [la.solve(cols, la.unit(alg.dim, j), len(basis))[:n_q] for j in range(alg.dim)]
    return Quotient(q, tuple(comp), la.from_columns(proj_cols, n_q))


def quotient_algebra(alg: AlmostLieAlgebra, ideal: Subspace) -> AlmostLieAlgebra:
    return quotient(alg, ideal).algebra
