"""Pfaffian group data, coefficient extensions and reductivity, all exact.

Everything is infinitesimal: groups appear only through their Lie algebras
and the linear actions they induce.

Matrix shapes follow the maps: ``i`` is z_dim x h_dim, ``p`` is v_dim x z_dim,
a left splitting ``l`` is h_dim x z_dim and a right splitting ``r`` is
z_dim x v_dim.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import linalg as la
from .algebra import (AlmostLieAlgebra, DimensionMismatch, LinearRep, Subspace, adjoint_rep, bracket,
                      image_of_linear_map, is_ideal, kernel_of_linear_map, quotient, semidirect)
from .algebras import gl, matrix_algebra
from .linalg import Matrix, Vector


class EquivarianceViolated(ValueError):
    def __init__(self, basis_index: int, msg: str = ""):
        self.basis_index = basis_index
        super().__init__(msg or f"l o ad(e{basis_index}) != rho(e{basis_index}) o l")


class NotASplitting(ValueError):
    pass


class NotReductive(ValueError):
    pass


def _cols(m: Matrix, ncols: int) -> list[Vector]:
    return la.columns(m, ncols)


def _apply(m: Matrix, v: Sequence) -> Vector:
    return la.matvec(m, v)


# --------------------------------------------------------------------------
# Pfaffian group data

@dataclass(frozen=True)
class PfaffianGroupData:
    g: AlmostLieAlgebra
    V_dim: int
    rho: LinearRep
    l: Matrix   # V_dim x g.dim

    def __post_init__(self):
        if self.rho.algebra.dim != self.g.dim or self.rho.space_dim != self.V_dim:
            raise DimensionMismatch("rho must act with g on V")
        if len(self.l) != self.V_dim or any(len(r) != self.g.dim for r in self.l):
            raise DimensionMismatch("l must be V_dim x dim(g)")

    def equivariance_witness(self) -> int | None:
        ad = adjoint_rep(self.g)
        for a in range(self.g.dim):
            if la.matmul(self.l, ad.matrices[a]) != la.matmul(self.rho.matrices[a], self.l):
                return a
        return None


def symbol_ideal(pf: PfaffianGroupData) -> Subspace:
    """h = ker(l); raises EquivarianceViolated when l is not a map of representations."""
    bad = pf.equivariance_witness()
    if bad is not None:
        raise EquivarianceViolated(bad)
    h = kernel_of_linear_map(pf.l, pf.g.dim)
    assert is_ideal(pf.g, h), "kernel of an equivariant l must be an ideal"
    return h


@dataclass(frozen=True)
class WImage:
    W: Subspace
    iso: Matrix                  # g/h (complement coordinates) -> W coordinates
    h: Subspace


def image_W(pf: PfaffianGroupData) -> WImage:
    """W = im(l) inside V, with the induced isomorphism g/h -> W."""
    h = symbol_ideal(pf)
    W = image_of_linear_map(pf.l, pf.V_dim)
    assert W.dim == pf.g.dim - h.dim
    for m in pf.rho.matrices:
        for b in W.basis:
            assert W.contains(_apply(m, b)), "W must be a subrepresentation"
    comp = h.complement()
    iso_cols = [W.coordinates(_apply(pf.l, c)) for c in comp]
    iso = la.from_columns(iso_cols, W.dim)
    if W.dim:
        assert la.rank(iso) == W.dim
    return WImage(W, iso, h)


@dataclass(frozen=True)
class TowerStage:
    g: AlmostLieAlgebra
    V_dim: int
    rho: LinearRep
    W_dim: int
    kernel_dim: int


@dataclass(frozen=True)
class Tower:
    stages: tuple[TowerStage, ...]

    @property
    def order(self) -> int:
        return len(self.stages)


def _quotient_space(W: Subspace):
    """Projection V -> V/W and a section V/W -> V via the standard complement."""
    comp = W.complement()
    basis = tuple(comp) + W.basis
    cols = la.from_columns(basis, W.ambient_dim)
    nq = len(comp)
    proj_cols = [la.solve(cols, la.unit(W.ambient_dim, j), len(basis))[:nq] for j in range(W.ambient_dim)]
    proj = la.from_columns(proj_cols, nq)
    section = la.from_columns(comp, W.ambient_dim)
    return proj, section


def reduction_tower(pf: PfaffianGroupData) -> Tower:
    """Iterate g_{i+1} = g_i / ker(g_i -> gl(V_i/W_i)), V_{i+1} = V_i/W_i.

    The order is the index of the first stage whose kernel vanishes, plus one.
    """
    symbol_ideal(pf)  # validates equivariance
    g, V_dim, rho, l = pf.g, pf.V_dim, pf.rho, pf.l
    stages = []
    while True:
        W = image_of_linear_map(l, V_dim) if g.dim else Subspace.zero(V_dim)
        proj, section = _quotient_space(W)
        nq = V_dim - W.dim
        induced = [la.matmul(proj, la.matmul(m, section)) if nq else () for m in rho.matrices]
        # alpha -> vec(induced(alpha)); its kernel is the kernel of the representation
        flat_cols = [tuple(x for row in m for x in row) for m in induced]
        if nq and g.dim:
            K = kernel_of_linear_map(la.from_columns(flat_cols, nq * nq), g.dim)
        else:
            K = Subspace.whole(g.dim) if g.dim else Subspace.zero(0)
        assert is_ideal(g, K)
        stages.append(TowerStage(g, V_dim, rho, W.dim, K.dim))
        if K.dim == 0:
            return Tower(tuple(stages))
        q = quotient(g, K)
        g1 = q.algebra
        rho1 = LinearRep(g1, nq, tuple(
            la.matmul(proj, la.matmul(rho.matrix(c), section)) if nq else () for c in q.complement))
        l1 = la.matmul(proj, la.matmul(l, la.from_columns(q.complement, g.dim))) if nq and g1.dim else \
            la.zeros(nq, g1.dim)
        g, V_dim, rho, l = g1, nq, rho1, l1


# --------------------------------------------------------------------------
# coefficient extensions

@dataclass(frozen=True)
class RepExtension:
    """0 -> h --i--> Z --p--> V -> 0, optionally with actions of a common algebra g."""

    h_dim: int
    z_dim: int
    v_dim: int
    i: Matrix
    p: Matrix
    rep_h: LinearRep | None = None
    rep_z: LinearRep | None = None
    rep_v: LinearRep | None = None

    def __post_init__(self):
        if len(self.i) != self.z_dim or any(len(r) != self.h_dim for r in self.i):
            raise DimensionMismatch("i must be z_dim x h_dim")
        if len(self.p) != self.v_dim or any(len(r) != self.z_dim for r in self.p):
            raise DimensionMismatch("p must be v_dim x z_dim")

    @property
    def has_reps(self) -> bool:
        return None not in (self.rep_h, self.rep_z, self.rep_v)

    def intertwines(self, m: Matrix, src: LinearRep, dst: LinearRep) -> int | None:
        """First basis index a with m o src(a) != dst(a) o m, else None."""
        for a, (ms, md) in enumerate(zip(src.matrices, dst.matrices)):
            if la.matmul(m, ms) != la.matmul(md, m):
                return a
        return None


@dataclass
class ExactnessReport:
    injective: bool
    surjective: bool
    exact: bool
    equivariant: bool | None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.injective and self.surjective and self.exact and self.equivariant is not False


def check_exact(ext: RepExtension) -> ExactnessReport:
    failures = []
    inj = ext.h_dim == 0 or la.rank(ext.i) == ext.h_dim
    if not inj:
        w = la.kernel(ext.i, ext.h_dim)[0]
        failures.append(f"i not injective: kills {list(map(str, w))}")
    surj = ext.v_dim == 0 or la.rank(ext.p) == ext.v_dim
    if not surj:
        im = image_of_linear_map(ext.p, ext.v_dim)
        miss = next(la.unit(ext.v_dim, j) for j in range(ext.v_dim) if not im.contains(la.unit(ext.v_dim, j)))
        failures.append(f"p not surjective: misses {list(map(str, miss))}")
    pi = la.matmul(ext.p, ext.i) if ext.h_dim and ext.v_dim else ()
    comp_zero = all(x == 0 for row in pi for x in row)
    if not comp_zero:
        failures.append("p o i != 0")
    ker_p = kernel_of_linear_map(ext.p, ext.z_dim) if ext.v_dim else Subspace.whole(ext.z_dim)
    im_i = image_of_linear_map(ext.i, ext.z_dim) if ext.h_dim else Subspace.zero(ext.z_dim)
    exact = comp_zero and ker_p.same_as(im_i)
    if comp_zero and not exact:
        failures.append(f"im(i) has dim {im_i.dim} but ker(p) has dim {ker_p.dim}")
    equiv = None
    if ext.has_reps:
        bi = ext.intertwines(ext.i, ext.rep_h, ext.rep_z)
        bp = ext.intertwines(ext.p, ext.rep_z, ext.rep_v)
        equiv = bi is None and bp is None
        if bi is not None:
            failures.append(f"i not equivariant at basis element {bi}")
        if bp is not None:
            failures.append(f"p not equivariant at basis element {bp}")
    return ExactnessReport(inj, surj, exact, equiv, failures)


@dataclass(frozen=True)
class SplittingPair:
    l: Matrix   # Z -> h
    r: Matrix   # V -> Z

    def is_valid_for(self, ext: RepExtension) -> bool:
        ok_l = ext.h_dim == 0 or la.matmul(self.l, ext.i) == la.identity(ext.h_dim)
        ok_r = ext.v_dim == 0 or la.matmul(ext.p, self.r) == la.identity(ext.v_dim)
        il = la.matmul(ext.i, self.l) if ext.h_dim else la.zeros(ext.z_dim, ext.z_dim)
        rp = la.matmul(self.r, ext.p) if ext.v_dim else la.zeros(ext.z_dim, ext.z_dim)
        return ok_l and ok_r and la.add(il, rp) == la.identity(ext.z_dim)


def complete_splitting(ext: RepExtension, *, l: Matrix | None = None, r: Matrix | None = None) -> SplittingPair:
    """Given one splitting map, return the unique partner with i l + r p = id."""
    if (l is None) == (r is None):
        raise ValueError("give exactly one of l, r")
    idz = la.identity(ext.z_dim)
    if l is not None:
        l = la.mat(l)
        if ext.h_dim and la.matmul(l, ext.i) != la.identity(ext.h_dim):
            raise NotASplitting("l o i != id_h")
        # right inverse s of p, then r = (id - i l) s
        s_cols = []
        for j in range(ext.v_dim):
            x = la.solve(ext.p, la.unit(ext.v_dim, j), ext.z_dim)
            if x is None:
                raise NotASplitting("p is not surjective")
            s_cols.append(x)
        s = la.from_columns(s_cols, ext.z_dim)
        proj = la.sub(idz, la.matmul(ext.i, l)) if ext.h_dim else idz
        r = la.matmul(proj, s) if ext.v_dim else la.zeros(ext.z_dim, 0)
    else:
        r = la.mat(r)
        if ext.v_dim and la.matmul(ext.p, r) != la.identity(ext.v_dim):
            raise NotASplitting("p o r != id_V")
        rest = la.sub(idz, la.matmul(r, ext.p)) if ext.v_dim else idz
        l_cols = []
        for col in _cols(rest, ext.z_dim):
            x = la.solve(ext.i, col, ext.h_dim)
            if x is None:
                raise NotASplitting("image of id - r p is not inside im(i)")
            l_cols.append(x)
        l = la.from_columns(l_cols, ext.h_dim)
    sp = SplittingPair(l, r)
    if not sp.is_valid_for(ext):
        raise NotASplitting("splitting identities fail")
    if ext.has_reps:
        eq_l = ext.intertwines(sp.l, ext.rep_z, ext.rep_h) is None
        eq_r = ext.intertwines(sp.r, ext.rep_v, ext.rep_z) is None
        assert eq_l == eq_r, "partner equivariance must match the given map"
    return sp


# --------------------------------------------------------------------------
# Cartan-type extensions

@dataclass(frozen=True)
class CartanTypeExtension:
    """Exact sequence plus almost brackets on Z and h; ``h_action`` is h acting on V."""

    ext: RepExtension
    z: AlmostLieAlgebra
    h: AlmostLieAlgebra
    h_action: LinearRep

    def __post_init__(self):
        e = self.ext
        if self.z.dim != e.z_dim or self.h.dim != e.h_dim or self.h_action.space_dim != e.v_dim:
            raise DimensionMismatch("algebra dimensions do not match the extension")
        bad = self.inclusion_witness()
        if bad is not None:
            raise ValueError(f"i is not a bracket morphism on basis pair {bad}")

    def inclusion_witness(self) -> tuple[int, int] | None:
        i_cols = _cols(self.ext.i, self.h.dim)
        for a, b in combinations(range(self.h.dim), 2):
            if _apply(self.ext.i, self.h.basis_bracket(a, b)) != bracket(self.z, i_cols[a], i_cols[b]):
                return a, b
        return None


@dataclass
class ReductivityReport:
    reductive: bool
    morphism_witness: tuple[int, int] | None = None
    action_witness: tuple[int, int] | None = None

    def __bool__(self):
        return self.reductive


def check_reductive(cte: CartanTypeExtension, sp: SplittingPair) -> ReductivityReport:
    """(a) l preserves brackets; (b) alpha(v) = p([i(alpha), r(v)]_z). Witnesses are basis pairs."""
    e = cte.ext
    if not sp.is_valid_for(e):
        raise NotASplitting("splitting pair does not split the sequence")
    z = cte.z
    zb = [la.unit(z.dim, a) for a in range(z.dim)]
    l_cols = _cols(sp.l, e.z_dim) if e.h_dim else [()] * z.dim
    morph = None
    if e.h_dim:
        for a, b in combinations(range(z.dim), 2):
            lhs = _apply(sp.l, bracket(z, zb[a], zb[b]))
            rhs = bracket(cte.h, l_cols[a], l_cols[b])
            if lhs != rhs:
                morph = (a, b)
                break
    action = None
    if e.h_dim and e.v_dim:
        i_cols = _cols(e.i, e.h_dim)
        r_cols = _cols(sp.r, e.v_dim)
        for a, v in product(range(e.h_dim), range(e.v_dim)):
            lhs = tuple(row[v] for row in cte.h_action.matrices[a])
            rhs = _apply(e.p, bracket(z, i_cols[a], r_cols[v]))
            if lhs != rhs:
                action = (a, v)
                break
    return ReductivityReport(morph is None and action is None, morph, action)


def induced_quotient_bracket(cte: CartanTypeExtension, sp: SplittingPair, name: str = "k") -> AlmostLieAlgebra:
    """[v, w]_k := p([r v, r w]_z) on V."""
    rep = check_reductive(cte, sp)
    if not rep:
        raise NotReductive(f"not reductive: {rep}")
    e = cte.ext
    r_cols = _cols(sp.r, e.v_dim) if e.v_dim else []
    brackets = {}
    for a, b in combinations(range(e.v_dim), 2):
        zab = bracket(cte.z, r_cols[a], r_cols[b])
        brackets[(a, b)] = _apply(e.p, zab)
    k = AlmostLieAlgebra.from_brackets(e.v_dim, brackets, name=name)
    for (a, b), w in brackets.items():
        assert _apply(sp.r, w) == bracket(cte.z, r_cols[a], r_cols[b]), "r must preserve brackets"
    return k


def semidirect_iso_check(cte: CartanTypeExtension, sp: SplittingPair) -> bool:
    """z -> h x| k, z |-> (l z, p z) preserves brackets on all basis pairs."""
    k = induced_quotient_bracket(cte, sp)
    target = semidirect(cte.h, cte.h_action, k)
    e = cte.ext
    phi = tuple(tuple(r) for r in (sp.l if e.h_dim else ())) + tuple(tuple(r) for r in (e.p if e.v_dim else ()))
    z = cte.z
    cols = _cols(phi, z.dim)
    for a, b in combinations(range(z.dim), 2):
        lhs = _apply(phi, z.basis_bracket(a, b))
        if lhs != bracket(target, cols[a], cols[b]):
            return False
    return True


def canonical_extension(h: AlmostLieAlgebra, action: LinearRep, k: AlmostLieAlgebra):
    """h x| k with the coordinate inclusion/projection and pr/incl splittings.

    The acting algebra for equivariance is h itself: ad on h, ``action`` on V,
    and their direct sum on Z.
    """
    n, m = h.dim, k.dim
    z = semidirect(h, action, k)
    i = tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n + m))
    p = tuple(tuple(Fraction(int(c == n + r)) for c in range(n + m)) for r in range(m))
    ad = adjoint_rep(h)
    rep_z = LinearRep(h, n + m, tuple(_block_diag(a, b) for a, b in zip(ad.matrices, action.matrices)))
    ext = RepExtension(n, n + m, m, i, p, ad, rep_z, action)
    sp = SplittingPair(la.transpose(i, n) if n else (), la.transpose(p, n + m) if m else la.zeros(n + m, 0))
    return CartanTypeExtension(ext, z, h, action), sp


def _block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b)
    z = Fraction(0)
    return tuple(tuple(a[r][c] if c < n else z for c in range(n + m)) for r in range(n)) + \
        tuple(tuple(b[r][c - n] if c >= n else z for c in range(n + m)) for r in range(m))


# --------------------------------------------------------------------------
# 2-jets: elements (A, S) <-> vector fields A x + 1/2 S(x, x) at 0

def _sym_index(n: int) -> list[tuple[int, int, int]]:
    return [(i, j, k) for i in range(n) for j in range(n) for k in range(j, n)]


def _jet_bracket(n, A, S, B, T):
    """Bracket with [A,B] the matrix commutator (minus the vector-field bracket), truncated at order 2.

    Quadratic part: A.T - B.S with (A.T)(u,v) = A T(u,v) - T(Au, v) - T(u, Av).
    """
    def act(M, U):
        return [[[sum(M[i][a] * U[a][j][k] for a in range(n))
                  - sum(U[i][a][k] * M[a][j] for a in range(n))
                  - sum(U[i][j][a] * M[a][k] for a in range(n))
                  for k in range(n)] for j in range(n)] for i in range(n)]
    C = la.commutator(A, B)
    AT, BS = act(A, T), act(B, S)
    U = [[[AT[i][j][k] - BS[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]
    return C, U


def _jet_from_vec(n, v):
    A = tuple(tuple(v[i * n + j] for j in range(n)) for i in range(n))
    S = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for c, (i, j, k) in enumerate(_sym_index(n)):
        S[i][j][k] = S[i][k][j] = v[n * n + c]
    return A, S


def _jet_to_vec(n, A, S):
    return tuple(A[i][j] for i in range(n) for j in range(n)) + tuple(S[i][j][k] for i, j, k in _sym_index(n))


def jet2_algebra(n: int) -> AlmostLieAlgebra:
    """Lie algebra of 2-jets at 0 of vector fields vanishing at 0.

    Basis: E_ij (linear part, gl(n)) then S^i_jk with j <= k (quadratic part).
    The projection to gl(n) is the matrix commutator.
    """
    sidx = _sym_index(n)
    dim = n * n + len(sidx)
    names = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)] + \
        [f"S{i + 1}_{j + 1}{k + 1}" for i, j, k in sidx]
    basis = [_jet_from_vec(n, la.unit(dim, a)) for a in range(dim)]
    brackets = {}
    for a, b in combinations(range(dim), 2):
        C, U = _jet_bracket(n, *basis[a], *basis[b])
        v = _jet_to_vec(n, C, U)
        if not la.is_zero(v):
            brackets[(a, b)] = v
    return AlmostLieAlgebra.from_brackets(dim, brackets, basis_names=names, name=f"jet2_{n}")


def _insert(n, S, w):
    """Matrix of u |-> S(w, u)."""
    return tuple(tuple(sum(w[a] * S[i][a][j] for a in range(n)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class SecondOrderModel:
    n: int
    g1_mats: tuple[Matrix, ...]
    g21_tensors: tuple
    cte: CartanTypeExtension
    splitting: SplittingPair
    pfaffian: PfaffianGroupData

    @property
    def k(self) -> AlmostLieAlgebra:
        """g1 x| R^n, the bracket on V."""
        return induced_quotient_bracket(self.cte, self.splitting)

    @property
    def dims(self) -> tuple[int, int, int]:
        return len(self.g21_tensors), len(self.g1_mats), self.n


def _default_g21(n):
    out = []
    for i, j, k in _sym_index(n):
        S = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        S[i][j][k] = S[i][k][j] = Fraction(1)
        out.append(S)
    return out


def second_order_model(n: int, g2_sub=None) -> SecondOrderModel:
    """z2 = g2_1 x| (g1 x| R^n) with canonical splittings.

    ``g2_sub`` optionally gives ``(g1_matrices, g21_tensors)``; the default is
    the full second-order group (g1 = gl(n), g2_1 = all symmetric tensors).
    Inserting a vector into a tensor, S(w, .), must land in g1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if g2_sub is None:
        g1 = gl(n)
        g21 = _default_g21(n)
    else:
        g1_mats, g21 = g2_sub
        g1 = matrix_algebra(g1_mats, [f"A{a + 1}" for a in range(len(g1_mats))], "g1")
        g21 = [[[[la.to_fraction(x) for x in row] for row in sl_] for sl_ in S] for S in g21]
    d1, d21 = g1.algebra.dim, len(g21)
    flat_g1 = la.from_columns([tuple(x for r in m for x in r) for m in g1.matrices], n * n)

    def g1_coords(M):
        x = la.solve(flat_g1, tuple(v for r in M for v in r), d1)
        if x is None:
            raise ValueError("S(w, .) leaves g1; tensors incompatible with g1")
        return x

    k = semidirect(g1.algebra, g1.standard_rep, AlmostLieAlgebra.abelian(n), name="k")
    h = AlmostLieAlgebra.abelian(d21, name="g2_1")
    acts = []
    for S in g21:
        cols = [(Fraction(0),) * (d1 + n)] * d1
        for a in range(n):
            cols.append(g1_coords(_insert(n, S, la.unit(n, a))) + (Fraction(0),) * n)
        acts.append(la.from_columns(cols, d1 + n))
    action = LinearRep(h, d1 + n, tuple(acts))

    # g2 = g1 + g2_1 inside jet2(n); its actions give the equivariance data
    jet = jet2_algebra(n)
    g2_vecs = [_jet_to_vec(n, M, [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]) for M in g1.matrices]
    g2_vecs += [_jet_to_vec(n, la.zeros(n, n), S) for S in g21]
    g2 = subalgebra(jet, g2_vecs, names=list(g1.algebra.basis_names) + [f"S{a + 1}" for a in range(d21)])

    def rho_v(a):
        A, S = _jet_from_vec(n, g2.lift(la.unit(g2.algebra.dim, a)))
        cols = []
        for b in range(d1):
            cols.append(g1_coords(la.commutator(A, g1.matrices[b])) + (Fraction(0),) * n)
        for c in range(n):
            w = la.unit(n, c)
            cols.append(g1_coords(_insert(n, S, w)) + tuple(row[c] for row in A))
        return la.from_columns(cols, d1 + n)

    rep_v = LinearRep(g2.algebra, d1 + n, tuple(rho_v(a) for a in range(g2.algebra.dim)))
    ad2 = adjoint_rep(g2.algebra)
    # g2_1 sits in the last d21 coordinates of g2 and is an ideal
    rep_h = LinearRep(g2.algebra, d21, tuple(tuple(row[d1:] for row in m[d1:]) for m in ad2.matrices))
    rep_z = LinearRep(g2.algebra, d21 + d1 + n,
                      tuple(_block_diag(a, b) for a, b in zip(rep_h.matrices, rep_v.matrices)))
    cte0, sp = canonical_extension(h, action, k)
    ext = RepExtension(d21, d21 + d1 + n, d1 + n, cte0.ext.i, cte0.ext.p, rep_h, rep_z, rep_v)
    cte = CartanTypeExtension(ext, cte0.z, h, action)
    l = tuple(tuple(Fraction(int(r == c)) if c < d1 else Fraction(0) for c in range(g2.algebra.dim))
              for r in range(d1)) + tuple((Fraction(0),) * g2.algebra.dim for _ in range(n))
    pf = PfaffianGroupData(g2.algebra, d1 + n, rep_v, l)
    return SecondOrderModel(n, tuple(g1.matrices), tuple(map(_freeze, g21)), cte, sp, pf)


def _freeze(S):
    return tuple(tuple(tuple(r) for r in m) for m in S)


@dataclass(frozen=True)
class Subalgebra:
    algebra: AlmostLieAlgebra
    basis: tuple[Vector, ...]   # in ambient coordinates
    ambient_dim: int

    def lift(self, v: Sequence) -> Vector:
        out = (Fraction(0),) * self.ambient_dim
        for c, b in zip(v, self.basis):
            if c:
                out = la.vadd(out, la.vscale(c, b))
        return out


def subalgebra(alg: AlmostLieAlgebra, vectors: Sequence[Sequence], names=None) -> Subalgebra:
    """Bracket restricted to span(vectors); ValueError if the span is not closed."""
    S = Subspace(alg.dim, tuple(la.vec(v) for v in vectors))
    brackets = {}
    for a, b in combinations(range(S.dim), 2):
        w = bracket(alg, S.basis[a], S.basis[b])
        if not S.contains(w):
            raise ValueError(f"span is not closed under the bracket at pair ({a}, {b})")
        x = S.coordinates(w)
        if not la.is_zero(x):
            brackets[(a, b)] = x
    sub = AlmostLieAlgebra.from_brackets(S.dim, brackets, basis_names=names)
    return Subalgebra(sub, S.basis, alg.dim)
