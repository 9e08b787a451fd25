"""Vector-valued forms on a coordinate box, finite-difference d, curvature and torsion.

Conventions:

* a 2-form value is an antisymmetric array ``w[..., a, b] = w(e_a, e_b)``;
  ``d(f dx^j)`` has entry ``[i, j] = d_i f`` minus its transpose;
* ``(tau ^ tau)(v, w) = [tau(v), tau(w)]`` and ``(tau ^ theta)(v, w) = tau(v) theta(w) - tau(w) theta(v)``;
* curvature is ``d eta + (eta ^ eta)``, i.e. ``d eta + 1/2 [eta, eta]``.

Every grid evaluation is vectorized over points; the optional ``threads``
argument only splits the point array into chunks, so results do not depend
on it.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np

from . import expr as ex
from . import linalg as la
from .algebra import AlmostLieAlgebra, DimensionMismatch, LinearRep, jacobi_witness, semidirect


class SingularCoframe(ValueError):
    def __init__(self, point):
        self.point = tuple(float(x) for x in point)
        super().__init__(f"coframe is singular at {self.point}")


class DegenerateFrame(ValueError):
    def __init__(self, point):
        self.point = tuple(float(x) for x in point)
        super().__init__(f"frame is degenerate at {self.point}")


class BoundaryError(ValueError):
    pass


@dataclass(frozen=True)
class ChartBox:
    coords: tuple[str, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    grid: int = 9
    fd_step: float = 1e-4
    tol: float = 1e-6

    def __post_init__(self):
        n = len(self.coords)
        if len(self.lo) != n or len(self.hi) != n:
            raise DimensionMismatch("lo/hi must have one entry per coordinate")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError("need lo < hi on every axis")
        if self.grid < 3:
            raise ValueError("grid must be at least 3")
        if self.fd_step <= 0 or self.fd_step >= min(b - a for a, b in zip(self.lo, self.hi)) / 10:
            raise ValueError("fd_step must be positive and below a tenth of the smallest extent")

    @classmethod
    def cube(cls, coords: Sequence[str], lo=-1.0, hi=1.0, **kw) -> "ChartBox":
        n = len(coords)
        return cls(tuple(coords), (float(lo),) * n, (float(hi),) * n, **kw)

    @property
    def n(self) -> int:
        return len(self.coords)

    def points(self) -> np.ndarray:
        """Tensor grid, ``grid`` points per axis, kept 2h away from the boundary."""
        m = 2 * self.fd_step
        axes = [np.linspace(a + m, b - m, self.grid) for a, b in zip(self.lo, self.hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=-1)

    def check_interior(self, p, h: float):
        p = np.asarray(p, dtype=float)
        if np.any(p - h < np.asarray(self.lo)) or np.any(p + h > np.asarray(self.hi)):
            raise BoundaryError(f"point {tuple(p)} is within {h} of the boundary")


@dataclass(frozen=True)
class VForm1:
    """An R^m-valued 1-form; ``components[i][j]`` is the dx^j coefficient of component i."""

    coords: tuple[str, ...]
    components: tuple[tuple[ex.Expr, ...], ...]

    def __post_init__(self):
        if any(len(r) != len(self.coords) for r in self.components):
            raise DimensionMismatch("each row needs one coefficient per coordinate")

    @classmethod
    def parse(cls, rows: Sequence[Sequence[str]], coords: Sequence[str]) -> "VForm1":
        coords = tuple(coords)
        return cls(coords, tuple(tuple(ex.parse(str(s), coords) for s in r) for r in rows))

    @classmethod
    def zero(cls, m: int, coords: Sequence[str]) -> "VForm1":
        return cls(tuple(coords), tuple((ex.ZERO,) * len(coords) for _ in range(m)))

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return len(self.coords)

    def values(self, pts) -> np.ndarray:
        """Array (..., m, n) of coefficients at the given points."""
        pts = np.asarray(pts, dtype=float)
        out = np.empty(pts.shape[:-1] + (self.m, self.n))
        for i, row in enumerate(self.components):
            for j, e in enumerate(row):
                out[..., i, j] = ex.evaluate(e, pts)
        return out

    def stack(self, other: "VForm1") -> "VForm1":
        if other.coords != self.coords:
            raise DimensionMismatch("forms live on different charts")
        return VForm1(self.coords, self.components + other.components)

    def pretty(self) -> list[list[str]]:
        return [[ex.pretty(e) for e in r] for r in self.components]


@dataclass(frozen=True)
class FrameField:
    """Vector fields V_a; ``fields[a][i]`` is the d/dx^i component of V_a."""

    coords: tuple[str, ...]
    fields: tuple[tuple[ex.Expr, ...], ...]

    @classmethod
    def parse(cls, rows, coords) -> "FrameField":
        coords = tuple(coords)
        return cls(coords, tuple(tuple(ex.parse(str(s), coords) for s in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.coords)

    def values(self, pts) -> np.ndarray:
        """Array (..., a, i)."""
        pts = np.asarray(pts, dtype=float)
        out = np.empty(pts.shape[:-1] + (len(self.fields), self.n))
        for a, row in enumerate(self.fields):
            for i, e in enumerate(row):
                out[..., a, i] = ex.evaluate(e, pts)
        return out

    def check_nondegenerate(self, pts, tol: float = 1e-8):
        v = self.values(pts)
        if len(self.fields) != self.n:
            raise DimensionMismatch("a frame needs n fields")
        det = np.linalg.det(v)
        bad = np.flatnonzero(np.abs(det) < tol)
        if bad.size:
            raise DegenerateFrame(np.asarray(pts)[bad[0]])


def _chunks(fn: Callable[[np.ndarray], np.ndarray], pts: np.ndarray, threads: int = 1) -> np.ndarray:
    if threads <= 1 or len(pts) < 2 * threads:
        return fn(pts)
    parts = np.array_split(pts, threads)
    with ThreadPoolExecutor(threads) as pool:
        return np.concatenate(list(pool.map(fn, parts)), axis=0)


# --------------------------------------------------------------------------
# exterior calculus

def fd_partials(values_fn: Callable[[np.ndarray], np.ndarray], pts: np.ndarray, h: float) -> np.ndarray:
    """Central differences of ``values_fn``; the derivative index sits right after the point axes."""
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[-1]
    out = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        out.append((values_fn(pts + e) - values_fn(pts - e)) / (2 * h))
    return np.stack(out, axis=pts.ndim - 1)


def fd_d(form: VForm1, p, h: float, box: ChartBox | None = None) -> np.ndarray:
    """d(form) at p (or at every row of p) as an antisymmetric (..., m, n, n) array."""
    p = np.asarray(p, dtype=float)
    if box is not None:
        for q in p.reshape(-1, p.shape[-1]):
            box.check_interior(q, h)
    D = fd_partials(form.values, p, h)           # (..., i, m, j): d_i eta^c_j
    D = np.moveaxis(D, -3, -2)                   # (..., m, i, j)
    return D - np.swapaxes(D, -1, -2)


def wedge_bracket(eta: np.ndarray, alg: AlmostLieAlgebra, other: np.ndarray | None = None) -> np.ndarray:
    """(eta ^ eta)(e_a, e_b) = [eta(e_a), eta(e_b)]; with ``other``, [eta(a), other(b)] - [eta(b), other(a)]."""
    if eta.shape[-2] != alg.dim:
        raise DimensionMismatch("form target dimension differs from the algebra")
    sc = alg.float_sc()
    if other is None:
        return np.einsum("ijk,...ja,...kb->...iab", sc, eta, eta)
    x = np.einsum("ijk,...ja,...kb->...iab", sc, eta, other)
    return x - np.swapaxes(x, -1, -2)


def wedge_action(tau: np.ndarray, theta: np.ndarray, rep: LinearRep) -> np.ndarray:
    """(tau ^ theta)(e_a, e_b) = rho(tau(e_a)) theta(e_b) - rho(tau(e_b)) theta(e_a)."""
    if tau.shape[-2] != rep.algebra.dim or theta.shape[-2] != rep.space_dim:
        raise DimensionMismatch("tau/theta targets do not match the representation")
    R = rep.float_matrices()
    x = np.einsum("xij,...xa,...jb->...iab", R, tau, theta)
    return x - np.swapaxes(x, -1, -2)


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def _worst(per_point: np.ndarray, pts: np.ndarray):
    """(max over points, point) for a (N, ...) array."""
    if per_point.size == 0:
        return 0.0, None
    flat = np.abs(per_point.reshape(per_point.shape[0], -1)).max(axis=1)
    k = int(np.argmax(flat))
    return float(flat[k]), tuple(float(x) for x in pts[k])


@dataclass
class CurvatureReport:
    points: np.ndarray
    values: np.ndarray              # (N, m, n, n)
    max_norm: float
    worst_point: tuple | None
    tol: float
    h_dim: int | None = None

    @property
    def flat(self) -> bool:
        return self.max_norm <= self.tol

    @property
    def split(self):
        """(Omega_h, Omega_k) when the target is h x| k."""
        if self.h_dim is None:
            raise ValueError("split needs a semidirect target")
        return self.values[:, :self.h_dim], self.values[:, self.h_dim:]

    def split_norms(self) -> tuple[float, float]:
        a, b = self.split
        return max_abs(a), max_abs(b)


def curvature_values(eta: VForm1, alg: AlmostLieAlgebra, pts: np.ndarray, h: float, threads: int = 1) -> np.ndarray:
    if eta.m != alg.dim:
        raise DimensionMismatch("eta target dimension differs from the algebra")

    def f(P):
        return fd_d(eta, P, h) + wedge_bracket(eta.values(P), alg)
    return _chunks(f, pts, threads)


def curvature(eta: VForm1, alg: AlmostLieAlgebra, box: ChartBox, *, h_dim: int | None = None,
              threads: int = 1) -> CurvatureReport:
    pts = box.points()
    vals = curvature_values(eta, alg, pts, box.fd_step, threads)
    m, wp = _worst(vals, pts)
    return CurvatureReport(pts, vals, m, wp, box.tol, h_dim)


# --------------------------------------------------------------------------
# structure equations

def _frames(theta_vals: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """E[..., i, a]: columns of the inverse coframe matrix."""
    det = np.linalg.det(theta_vals)
    scale = np.max(np.abs(theta_vals), axis=(-1, -2)) ** theta_vals.shape[-1]
    bad = np.flatnonzero(np.abs(det).ravel() <= 1e-12 * np.maximum(scale.ravel(), 1e-300))
    if bad.size:
        raise SingularCoframe(pts.reshape(-1, pts.shape[-1])[bad[0]])
    return np.linalg.inv(theta_vals)


def torsion_curvature_at(theta: VForm1, tau: VForm1, rep: LinearRep, h_alg: AlmostLieAlgebra,
                         pts, h: float):
    """T (..., k, n, n) and R (..., g, n, n) from dtheta = T(theta^theta) - tau^theta, dtau = R(theta^theta) - tau^tau.

    Both are read off on the frame dual to theta: T(e_a, e_b) = dtheta(E_a, E_b) + (tau^theta)(E_a, E_b)
    and R(e_a, e_b) = dtau(E_a, E_b) + [tau(E_a), tau(E_b)].
    """
    pts = np.asarray(pts, dtype=float)
    if theta.m != theta.n:
        raise DimensionMismatch("theta must be a coframe (square)")
    if tau.m != rep.algebra.dim or theta.m != rep.space_dim:
        raise DimensionMismatch("tau/theta do not match the representation")
    th = theta.values(pts)
    E = _frames(th, pts)
    dth = fd_d(theta, pts, h)
    dta = fd_d(tau, pts, h)
    ta = tau.values(pts)
    # pull everything into the frame
    dth_E = np.einsum("...cij,...ia,...jb->...cab", dth, E, E)
    dta_E = np.einsum("...cij,...ia,...jb->...cab", dta, E, E)
    ta_E = np.einsum("...ci,...ia->...ca", ta, E)
    eye = np.broadcast_to(np.eye(theta.n), ta_E.shape[:-2] + (theta.n, theta.n))
    T = dth_E + wedge_action(ta_E, eye, rep)
    R = dta_E + wedge_bracket(ta_E, h_alg)
    return T, R


def torsion_curvature(theta: VForm1, tau: VForm1, rep: LinearRep, box: ChartBox, p,
                      h_alg: AlmostLieAlgebra | None = None):
    """Single-point version; h_alg defaults to the acting algebra of ``rep``."""
    box.check_interior(p, box.fd_step)
    return torsion_curvature_at(theta, tau, rep, h_alg or rep.algebra, np.asarray(p, float), box.fd_step)


@dataclass
class Scenario:
    name: str
    box: ChartBox
    theta: VForm1
    tau: VForm1
    h: AlmostLieAlgebra
    k: AlmostLieAlgebra
    rep: LinearRep          # h acting on k
    frames: FrameField | None = None

    def __post_init__(self):
        if self.rep.algebra.dim != self.h.dim or self.rep.space_dim != self.k.dim:
            raise DimensionMismatch("rep must be an action of h on k")
        if self.theta.m != self.k.dim or self.tau.m != self.h.dim:
            raise DimensionMismatch("theta must be k-valued and tau h-valued")

    @property
    def z(self) -> AlmostLieAlgebra:
        return semidirect(self.h, self.rep, self.k)


@dataclass
class FlatnessReport:
    flat: bool
    max_R: float
    max_torsion_residual: float
    worst_point: tuple | None
    worst_component: tuple | None     # (i, a, b), 1-based, of T + d
    worst_T: float | None
    tol: float
    z_is_lie: bool
    points: int

    @property
    def verdict(self) -> str:
        return "FLAT" if self.flat else "NOT-FLAT"


def flatness_check(sc: Scenario, threads: int = 1) -> FlatnessReport:
    """FLAT iff R = 0 and T = -d (the structure constants of k) on the whole grid."""
    pts = sc.box.points()
    h = sc.box.fd_step

    def f(P):
        T, R = torsion_curvature_at(sc.theta, sc.tau, sc.rep, sc.h, P, h)
        return np.concatenate([T.reshape(len(P), -1), R.reshape(len(P), -1)], axis=1)
    flat_TR = _chunks(f, pts, threads)
    n, kd, hd = sc.theta.n, sc.k.dim, sc.h.dim
    T = flat_TR[:, :kd * n * n].reshape(-1, kd, n, n)
    R = flat_TR[:, kd * n * n:].reshape(-1, hd, n, n)
    resid = T + sc.k.float_sc()[None]
    mr = max_abs(R)
    mt, wp = _worst(resid, pts)
    wc = wT = None
    if resid.size:
        idx = np.unravel_index(int(np.argmax(np.abs(resid))), resid.shape)
        wp = tuple(float(x) for x in pts[idx[0]])
        wc = tuple(int(i) + 1 for i in idx[1:])
        wT = float(T[idx])
    if mr > mt and R.size:
        idx = np.unravel_index(int(np.argmax(np.abs(R))), R.shape)
        wp = tuple(float(x) for x in pts[idx[0]])
    tol = sc.box.tol
    return FlatnessReport(mr <= tol and mt <= tol, mr, mt, wp, wc, wT, tol,
                          jacobi_witness(sc.z) is None, len(pts))


# --------------------------------------------------------------------------
# lifts and curvature identities

def _lincomb(coeffs: Sequence[Fraction], exprs: Sequence[ex.Expr]) -> ex.Expr:
    out = None
    for c, e in zip(coeffs, exprs):
        if c == 0 or ex.is_const_zero(e):
            continue
        term = e if c == 1 else ex.Neg(e) if c == -1 else ex.Mul(ex.Num(Fraction(c)), e)
        if out is None:
            out = term
        elif isinstance(term, ex.Neg):
            out = ex.Sub(out, term.arg)
        else:
            out = ex.Add(out, term)
    return out if out is not None else ex.ZERO


def assemble_lift(tau: VForm1, theta: VForm1, i: la.Matrix, r: la.Matrix) -> VForm1:
    """eta = i o tau + r o theta, assembled as expressions (no numerics)."""
    if tau.coords != theta.coords:
        raise DimensionMismatch("tau and theta live on different charts")
    zdim = len(i) if i else len(r)
    if (i and len(i[0]) != tau.m) or (r and r[0] and len(r[0]) != theta.m) or len(r) != zdim:
        raise DimensionMismatch("splitting maps do not match the forms")
    rows = []
    for c in range(zdim):
        row = []
        for j in range(tau.n):
            exprs = [tau.components[a][j] for a in range(tau.m)] + [theta.components[v][j] for v in range(theta.m)]
            coeffs = list(i[c] if tau.m else ()) + list(r[c] if theta.m else ())
            row.append(_lincomb(coeffs, exprs))
        rows.append(tuple(row))
    return VForm1(tau.coords, tuple(rows))


def canonical_lift(tau: VForm1, theta: VForm1) -> VForm1:
    """(tau, theta) as a form with values in h x| k."""
    return tau.stack(theta)


@dataclass
class SplitReport:
    max_discrepancy: float
    worst_point: tuple | None
    max_h_discrepancy: float
    max_k_discrepancy: float
    points: int
    naive_discrepancy: float | None = None

    def ok(self, tol: float = 1e-8) -> bool:
        return self.max_discrepancy <= tol


def curvature_split_check(tau: VForm1, theta: VForm1, h: AlmostLieAlgebra, k: AlmostLieAlgebra,
                          rep: LinearRep, box: ChartBox, threads: int = 1) -> SplitReport:
    """Compare Omega^eta (computed in h x| k) with (Omega^tau, Omega^theta + tau^theta)."""
    z = semidirect(h, rep, k)
    eta = canonical_lift(tau, theta)
    pts = box.points()
    hs = box.fd_step
    lhs = curvature_values(eta, z, pts, hs, threads)

    def rhs_fn(P):
        ta, th = tau.values(P), theta.values(P)
        om_tau = fd_d(tau, P, hs) + wedge_bracket(ta, h)
        om_th = fd_d(theta, P, hs) + wedge_bracket(th, k) + wedge_action(ta, th, rep)
        return np.concatenate([om_tau, om_th], axis=1)
    rhs = _chunks(rhs_fn, pts, threads)
    diff = lhs - rhs
    m, wp = _worst(diff, pts)
    return SplitReport(m, wp, max_abs(diff[:, :h.dim]), max_abs(diff[:, h.dim:]), len(pts))


def second_order_split_check(tau2: VForm1, tau1: VForm1, theta1: VForm1, model, box: ChartBox,
                             threads: int = 1) -> SplitReport:
    """Omega^{eta2} for eta2 = (tau2, tau1, theta1) in z2 against (d tau2, Omega^{eta1} + (tau2 ^ theta1, 0)).

    ``model`` is a SecondOrderModel. The g2_1 part of z2 is abelian, so its
    curvature is d tau2. The k-part picks up the insertion term tau2 ^ theta1
    in g1; ``naive_discrepancy`` is the defect when that term is left out.
    """
    cte = model.cte
    z2 = cte.z
    k = model.k
    h_dim = cte.h.dim
    g1_dim = len(model.g1_mats)
    if tau2.m != h_dim or tau1.m != g1_dim or theta1.m != model.n:
        raise DimensionMismatch("forms do not match the second-order model")
    eta1 = tau1.stack(theta1)
    eta2 = tau2.stack(eta1)
    pts = box.points()
    hs = box.fd_step
    lhs = curvature_values(eta2, z2, pts, hs, threads)
    # h acting on V = g1 + R^n restricted to R^n -> g1: the insertion S(w, .)
    act = cte.h_action.float_matrices()[:, :g1_dim, g1_dim:]

    def rhs_fn(P):
        om1 = fd_d(eta1, P, hs) + wedge_bracket(eta1.values(P), k)
        x = np.einsum("xij,...xa,...jb->...iab", act, tau2.values(P), theta1.values(P))
        ins = x - np.swapaxes(x, -1, -2)
        corr = np.concatenate([ins, np.zeros(ins.shape[:-3] + (model.n,) + ins.shape[-2:])], axis=-3)
        return np.concatenate([fd_d(tau2, P, hs), om1, om1 + corr], axis=1)
    both = _chunks(rhs_fn, pts, threads)
    v = g1_dim + model.n
    dt2 = both[:, :h_dim]
    naive = np.concatenate([dt2, both[:, h_dim:h_dim + v]], axis=1)
    rhs = np.concatenate([dt2, both[:, h_dim + v:]], axis=1)
    diff = lhs - rhs
    m, wp = _worst(diff, pts)
    return SplitReport(m, wp, max_abs(diff[:, :h_dim]), max_abs(diff[:, h_dim:]), len(pts),
                       naive_discrepancy=max_abs(lhs - naive))


# --------------------------------------------------------------------------
# frames

def lie_bracket_frames(F: FrameField, p, h: float, box: ChartBox | None = None) -> np.ndarray:
    """B[..., a, b, :] = [V_a, V_b] = DV_b V_a - DV_a V_b by central differences."""
    p = np.asarray(p, dtype=float)
    if box is not None:
        for q in p.reshape(-1, p.shape[-1]):
            box.check_interior(q, h)
    V = F.values(p)                                 # (..., a, i)
    D = fd_partials(F.values, p, h)                 # (..., j, a, i): d_j V_a^i
    x = np.einsum("...aj,...jbi->...abi", V, D)     # V_a(V_b^i)
    return x - np.swapaxes(x, -2, -3)


@dataclass
class IntegrabilityReport:
    passed: bool
    max_residual: float
    witness: tuple[int, int] | None    # 1-based pair (a, b)
    worst_point: tuple | None
    tol: float
    points: int

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def k_integrability_witness(F: FrameField, k: AlmostLieAlgebra, box: ChartBox, threads: int = 1) -> IntegrabilityReport:
    """PASS iff [V_a, V_b] = sum_i d^i_ab V_i everywhere on the grid (within tol)."""
    if len(F.fields) != k.dim:
        raise DimensionMismatch("need one field per basis element of k")
    pts = box.points()
    F.check_nondegenerate(pts)
    sc = k.float_sc()

    def f(P):
        B = lie_bracket_frames(F, P, box.fd_step)
        target = np.einsum("iab,...ij->...abj", sc, F.values(P))
        return B - target
    resid = _chunks(f, pts, threads)
    m, wp = _worst(resid, pts)
    witness = None
    if m > box.tol:
        per_pair = np.abs(resid).max(axis=(0, 3))
        a, b = np.unravel_index(int(np.argmax(np.triu(per_pair, 1))), per_pair.shape)
        witness = (int(a) + 1, int(b) + 1)
    return IntegrabilityReport(m <= box.tol, m, witness, wp, box.tol, len(pts))


def fd_order_ratio(form: VForm1, p, h0: float = 1e-2) -> float:
    """Richardson estimate |D(h) - D(h/2)| / |D(h/2) - D(h/4)|; about 4 for a second-order scheme."""
    d1, d2, d4 = (fd_d(form, p, h0 / s) for s in (1, 2, 4))
    num, den = max_abs(d1 - d2), max_abs(d2 - d4)
    if den == 0:
        raise ValueError("differences vanish; the field is too low-degree to measure the order")
    return num / den


def random_poly_form(rng: np.random.Generator, m: int, coords: Sequence[str], degree: int = 2,
                     denom: int = 4, density: float = 0.6) -> VForm1:
    """Random form whose coefficients are polynomials of degree <= ``degree`` with small rational coefficients."""
    coords = tuple(coords)
    n = len(coords)
    monos = [mo for d in range(degree + 1) for mo in combinations_with_replacement(range(n), d)]
    rows = []
    for _ in range(m):
        row = []
        for _ in range(n):
            terms = []
            for mo in monos:
                if rng.random() < density:
                    c = Fraction(int(rng.integers(-2 * denom, 2 * denom + 1)), denom)
                    if c == 0:
                        continue
                    e = None if mo and abs(c) == 1 else ex.Num(abs(c))
                    for j in mo:
                        v = ex.Var(coords[j], j)
                        e = v if e is None else ex.Mul(e, v)
                    terms.append((c, e))
            row.append(_lincomb([1 if c > 0 else -1 for c, _ in terms], [e for _, e in terms]))
        rows.append(tuple(row))
    return VForm1(coords, tuple(rows))
