"""Free transitive actions, the groupoid (K x| X) x G and its Pfaffian form.

Two families of K are supported, both acting on X = R^N by left
multiplication with base point x0 = 0 (the identity):

* translations of R^n, ``k + x``;
* the Heisenberg group on R^(2k+1), ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+<a,b'>)``.

Differentials are closed form for translations and central differences
(step 1e-5) for Heisenberg. Tangent vectors are coordinate vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .algebra import AlmostLieAlgebra, LinearRep, is_lie
from .extensions import CartanTypeExtension, SplittingPair, canonical_extension, check_reductive

FD_STEP = 1e-5


class NonComposable(ValueError):
    pass


class SingularDifferential(ValueError):
    pass


@dataclass(frozen=True)
class FreeTransitiveAction:
    kind: str          # "translations" or "heisenberg"
    size: int          # n for translations, k for Heisenberg

    def __post_init__(self):
        if self.kind not in ("translations", "heisenberg"):
            raise ValueError(f"unknown model {self.kind!r}")
        if self.size < 1:
            raise ValueError("size must be >= 1")

    @classmethod
    def translations(cls, n: int) -> "FreeTransitiveAction":
        return cls("translations", n)

    @classmethod
    def heisenberg(cls, k: int = 1) -> "FreeTransitiveAction":
        return cls("heisenberg", k)

    @property
    def dim(self) -> int:
        return self.size if self.kind == "translations" else 2 * self.size + 1

    @property
    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)

    @property
    def x0(self) -> np.ndarray:
        return np.zeros(self.dim)

    @property
    def exact_differentials(self) -> bool:
        return self.kind == "translations"

    def mul(self, k1, k2) -> np.ndarray:
        k1, k2 = np.asarray(k1, float), np.asarray(k2, float)
        if self.kind == "translations":
            return k1 + k2
        s = self.size
        out = k1 + k2
        out[..., -1] += np.sum(k1[..., :s] * k2[..., s:2 * s], axis=-1)
        return out

    def inv(self, k) -> np.ndarray:
        k = np.asarray(k, float)
        if self.kind == "translations":
            return -k
        s = self.size
        out = -k
        out[..., -1] += np.sum(k[..., :s] * k[..., s:2 * s], axis=-1)
        return out

    def act(self, k, x) -> np.ndarray:
        return self.mul(k, x)

    def as_matrix(self, k) -> np.ndarray:
        """Matrix realization, used as an independent oracle."""
        k = np.asarray(k, float)
        if self.kind == "translations":
            n = self.size
            m = np.eye(n + 1)
            m[:n, n] = k
            return m
        s = self.size
        m = np.eye(s + 2)
        m[0, 1:s + 1] = k[:s]
        m[1:s + 1, s + 1] = k[s:2 * s]
        m[0, s + 1] = k[-1]
        return m

    def from_matrix(self, m) -> np.ndarray:
        m = np.asarray(m, float)
        if self.kind == "translations":
            return m[:-1, -1].copy()
        s = self.size
        return np.concatenate([m[0, 1:s + 1], m[1:s + 1, s + 1], [m[0, s + 1]]])

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return rng.uniform(-scale, scale, self.dim)

    # --- differentials -----------------------------------------------------

    def dm(self, k, x, v1, v2) -> np.ndarray:
        """d_(k,x) m^K (v1, v2)."""
        v1, v2 = np.asarray(v1, float), np.asarray(v2, float)
        if self.kind == "translations":
            return v1 + v2
        h = FD_STEP
        k, x = np.asarray(k, float), np.asarray(x, float)
        return (self.act(k + h * v1, x + h * v2) - self.act(k - h * v1, x - h * v2)) / (2 * h)

    def dmul(self, k2, k1, u2, u1) -> np.ndarray:
        """Differential of group multiplication at (k2, k1)."""
        return self.dm(k2, k1, u2, u1)

    def dT(self, k, x) -> np.ndarray:
        """Matrix of d_x T_k."""
        return np.stack([self.dm(k, x, np.zeros(self.dim), e) for e in np.eye(self.dim)], axis=1)

    def dorbit(self, x, k) -> np.ndarray:
        """Matrix of d_k Phi_x, the orbit map k |-> k.x."""
        return np.stack([self.dm(k, x, e, np.zeros(self.dim)) for e in np.eye(self.dim)], axis=1)

    def dPhi(self, y, x, u) -> np.ndarray:
        """d_(y,x) Phi (u, 0)."""
        u = np.asarray(u, float)
        if self.kind == "translations":
            return u
        h = FD_STEP
        y, x = np.asarray(y, float), np.asarray(x, float)
        return (divisor(self, y + h * u, x) - divisor(self, y - h * u, x)) / (2 * h)


def divisor(act: FreeTransitiveAction, y, x) -> np.ndarray:
    """Phi(y, x): the unique k with k.x = y."""
    return act.mul(y, act.inv(x))


@dataclass(frozen=True)
class GroupoidArrow:
    k: np.ndarray
    x: np.ndarray
    A: np.ndarray

    def source(self, act=None) -> np.ndarray:
        return self.x

    def target(self, act: FreeTransitiveAction) -> np.ndarray:
        return act.act(self.k, self.x)


def arrow(k, x, A) -> GroupoidArrow:
    return GroupoidArrow(np.asarray(k, float), np.asarray(x, float), np.asarray(A, float))


def unit_arrow(act: FreeTransitiveAction, x) -> GroupoidArrow:
    return arrow(act.identity, x, np.eye(act.dim))


def compose(act: FreeTransitiveAction, a2: GroupoidArrow, a1: GroupoidArrow, tol: float = 1e-9) -> GroupoidArrow:
    """(k2, k1.x, A2)(k1, x, A1) = (k2 k1, x, A2 A1)."""
    t1 = a1.target(act)
    if not np.allclose(a2.x, t1, atol=tol, rtol=0):
        raise NonComposable(f"source {a2.x} != target {t1}")
    return GroupoidArrow(act.mul(a2.k, a1.k), a1.x, a2.A @ a1.A)


def invert(act: FreeTransitiveAction, a: GroupoidArrow) -> GroupoidArrow:
    return GroupoidArrow(act.inv(a.k), a.target(act), np.linalg.inv(a.A))


# --------------------------------------------------------------------------
# the Pfaffian form

def A_tilde(act: FreeTransitiveAction, g: GroupoidArrow) -> np.ndarray:
    """d_x0 T_(Phi(kx, x0)) o A o (d_x0 T_(Phi(x, x0)))^-1 : T_x X -> T_kx X."""
    x0 = act.x0
    q_t = divisor(act, g.target(act), x0)
    q_s = divisor(act, g.x, x0)
    return act.dT(q_t, x0) @ g.A @ np.linalg.inv(act.dT(q_s, x0))


def A_bar(act: FreeTransitiveAction, g: GroupoidArrow) -> np.ndarray:
    """The arrow action written with orbit-map differentials, as a map T_(Phi(x,x0)) K -> T_(Phi(kx,x0)) K.

    Uses Phi_y for y = Phi(x0, x).x0 at the source and y = Phi(x0, kx).x0 at the target.
    """
    x0 = act.x0
    y_s = act.act(divisor(act, x0, g.x), x0)
    y_t = act.act(divisor(act, x0, g.target(act)), x0)
    src = act.dorbit(y_s, divisor(act, g.x, x0))
    tgt = act.dorbit(y_t, divisor(act, g.target(act), x0))
    return np.linalg.inv(tgt) @ g.A @ src


def omega_target(act: FreeTransitiveAction, g: GroupoidArrow, v1, v2) -> np.ndarray:
    """dm(v1, v2) - A~(v2) in T_kx X; omega is d Phi of this."""
    return act.dm(g.k, g.x, v1, v2) - A_tilde(act, g) @ np.asarray(v2, float)


def pfaffian_omega(act: FreeTransitiveAction, g: GroupoidArrow, v1, v2, v3=None) -> np.ndarray:
    """omega_(k,x,A)(v1, v2, v3) in T_k K; v3 (the G direction) does not enter."""
    return act.dPhi(g.target(act), g.x, omega_target(act, g, v1, v2))


def holonomic_bisection_residual(act: FreeTransitiveAction, k, points: np.ndarray) -> float:
    """max |omega_(k,x,I)(0, v, 0)| over grid points and coordinate directions v."""
    k = np.asarray(k, float)
    I = np.eye(act.dim)
    zero = np.zeros(act.dim)
    worst = 0.0
    for x in np.atleast_2d(points):
        g = GroupoidArrow(k, x, I)
        for v in I:
            worst = max(worst, float(np.max(np.abs(pfaffian_omega(act, g, zero, v)))))
    return worst


def _to_E(act, y):
    """Matrix T_y X -> E_y = T_(Phi(y,x0)) K (inverse orbit differential at x0)."""
    return np.linalg.inv(act.dorbit(act.x0, divisor(act, y, act.x0)))


def multiplicativity_defect(act: FreeTransitiveAction, g2: GroupoidArrow, g1: GroupoidArrow,
                            u1, v1, v, *, literal: bool = False) -> float:
    """|omega(g2 g1)(W) - omega(g2)(V2) - g2.omega(g1)(V1)| in the representation fibre at the final target.

    V1 = (v1, v, *) at g1, V2 = (u1, dm(v1, v), *) at g2 and W = (dmul(u1, v1), v, *) at the product.
    omega is moved into E = (Phi^-1_x0)^* TK through the orbit map at the target.
    With ``literal=True`` the arrow action is A_bar instead of the conjugated A~.
    """
    g = compose(act, g2, g1)
    w2 = act.dm(g1.k, g1.x, v1, v)
    lhs = _to_E(act, g.target(act)) @ omega_target(act, g, act.dmul(g2.k, g1.k, u1, v1), v)
    r2 = _to_E(act, g2.target(act)) @ omega_target(act, g2, u1, w2)
    e1 = _to_E(act, g1.target(act)) @ omega_target(act, g1, v1, v)
    if literal:
        action = A_bar(act, g2)
    else:
        mid = act.dorbit(act.x0, divisor(act, g2.x, act.x0))
        action = _to_E(act, g2.target(act)) @ A_tilde(act, g2) @ mid
    return float(np.max(np.abs(lhs - r2 - action @ e1)))


def sample_G(rng: np.random.Generator, g_mats: Sequence[np.ndarray] | None, dim: int, scale: float = 0.5):
    """exp of a random element of span(g_mats); the identity when g_mats is None."""
    if not g_mats:
        return np.eye(dim)
    c = rng.uniform(-scale, scale, len(g_mats))
    return expm(sum(ci * np.asarray(m, float) for ci, m in zip(c, g_mats)))


@dataclass
class MultiplicativityReport:
    max_defect: float
    max_literal_defect: float
    samples: int


def multiplicativity_residual(act: FreeTransitiveAction, g_mats, rng: np.random.Generator,
                              samples: int = 200, scale: float = 1.0) -> MultiplicativityReport:
    """Sample composable pairs and tangents; report the worst defect for both arrow actions."""
    worst = worst_lit = 0.0
    d = act.dim
    for _ in range(samples):
        x = act.random_element(rng, scale)
        k1, k2 = act.random_element(rng, scale), act.random_element(rng, scale)
        g1 = GroupoidArrow(k1, x, sample_G(rng, g_mats, d))
        g2 = GroupoidArrow(k2, g1.target(act), sample_G(rng, g_mats, d))
        u1, v1, v = (rng.normal(size=d) for _ in range(3))
        worst = max(worst, multiplicativity_defect(act, g2, g1, u1, v1, v))
        worst_lit = max(worst_lit, multiplicativity_defect(act, g2, g1, u1, v1, v, literal=True))
    return MultiplicativityReport(worst, worst_lit, samples)


# --------------------------------------------------------------------------
# isotropy action and the induced extension

def isotropy_action(act: FreeTransitiveAction, dphi, k) -> np.ndarray:
    """A.k = Phi_x0^-1(x0 + A(Phi_x0(k) - x0)) with X = R^N identified with T_x0 X."""
    A = np.asarray(dphi, float)
    if abs(np.linalg.det(A)) < 1e-12:
        raise SingularDifferential("the differential at x0 is not invertible")
    x0 = act.x0
    y = x0 + A @ (act.act(k, x0) - x0)
    return divisor(act, y, x0)


def infinitesimal_rep_float(act: FreeTransitiveAction, g_mats: Sequence) -> np.ndarray:
    """Matrices (one per basis element of g) of the derived action on the Lie algebra of K, by mixed FD."""
    h = FD_STEP
    d = act.dim
    e = act.identity
    out = []
    for a in g_mats:
        a = np.asarray(a, float)
        M = np.zeros((d, d))
        for j in range(d):
            ej = np.eye(d)[j]
            f = lambda t, s: isotropy_action(act, np.eye(d) + t * a, e + s * ej)
            M[:, j] = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)
        out.append(M)
    return np.array(out).reshape(len(out), d, d)


def lie_algebra_float(act: FreeTransitiveAction) -> np.ndarray:
    """Structure constants sc[i, j, k] of Lie(K) from the commutator d_s d_t [m(sX, tY) - m(tY, sX)]."""
    h = FD_STEP
    d = act.dim
    E = np.eye(d)
    sc = np.zeros((d, d, d))
    for j in range(d):
        for k in range(d):
            f = lambda s, t: act.mul(s * E[j], t * E[k]) - act.mul(t * E[k], s * E[j])
            sc[:, j, k] = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)
    return sc


def snap(values: np.ndarray, tol: float = 1e-6, max_den: int = 16):
    """Nearest rationals with denominator <= max_den, or None if some entry is farther than tol."""
    flat = np.asarray(values, float).ravel()
    out = []
    for v in flat:
        q = Fraction(float(v)).limit_denominator(max_den)
        if abs(float(q) - v) > tol:
            return None
        out.append(q)
    return out


def _reshape(flat, shape):
    if len(shape) == 1:
        return tuple(flat)
    step = int(np.prod(shape[1:]))
    return tuple(_reshape(flat[i * step:(i + 1) * step], shape[1:]) for i in range(shape[0]))


@dataclass
class InducedExtension:
    exact: bool
    k_float: np.ndarray
    rep_float: np.ndarray
    k: AlmostLieAlgebra | None = None
    cte: CartanTypeExtension | None = None
    splitting: SplittingPair | None = None
    reductive: bool | None = None
    z_is_lie: bool | None = None


def infinitesimal_rep(act: FreeTransitiveAction, g: AlmostLieAlgebra, g_mats: Sequence) -> LinearRep:
    """Snapped exact version of :func:`infinitesimal_rep_float`; ValueError if snapping fails."""
    fl = infinitesimal_rep_float(act, g_mats)
    sn = snap(fl)
    if sn is None:
        raise ValueError("infinitesimal action is not close to small rationals")
    return LinearRep(g, act.dim, _reshape(sn, fl.shape))


def build_reductive_extension(act: FreeTransitiveAction, g: AlmostLieAlgebra, g_mats: Sequence,
                              k_name: str = "k") -> InducedExtension:
    """z = g x| Lie(K) from the isotropy action, snapped to exact rationals and re-verified.

    When snapping fails the result carries only the float data (``exact`` is False).
    """
    k_fl = lie_algebra_float(act)
    rep_fl = infinitesimal_rep_float(act, g_mats) if g.dim else np.zeros((0, act.dim, act.dim))
    k_sn, rep_sn = snap(k_fl), snap(rep_fl) if g.dim else []
    if k_sn is None or rep_sn is None:
        return InducedExtension(False, k_fl, rep_fl)
    sc = _reshape(k_sn, k_fl.shape)
    d = act.dim
    names = [f"a{i + 1}" for i in range(act.size)] + [f"b{i + 1}" for i in range(act.size)] + ["c"] \
        if act.kind == "heisenberg" else [f"t{i + 1}" for i in range(d)]
    if act.kind == "heisenberg" and act.size == 1:
        names = ["x", "y", "z"]
    k = AlmostLieAlgebra(d, tuple(names), sc, k_name)
    rep = LinearRep(g, d, _reshape(rep_sn, rep_fl.shape) if g.dim else ())
    if is_lie(g) and not rep.is_representation():
        raise AssertionError("snapped action is not a representation")
    cte, sp = canonical_extension(g, rep, k)
    red = check_reductive(cte, sp)
    return InducedExtension(True, k_fl, rep_fl, k, cte, sp, red.reductive, is_lie(cte.z))


# --------------------------------------------------------------------------
# sampled identities

def divisor_identity_residual(act: FreeTransitiveAction, rng: np.random.Generator, samples: int = 1000,
                              scale: float = 1.0) -> float:
    """max over random x, y, z of the defects in Phi(y,x).x = y, Phi(y,x)^-1 = Phi(x,y), Phi(z,y)Phi(y,x) = Phi(z,x)."""
    worst = 0.0
    for _ in range(samples):
        x, y, z = (act.random_element(rng, scale) for _ in range(3))
        p = divisor(act, y, x)
        worst = max(worst,
                    float(np.max(np.abs(act.act(p, x) - y))),
                    float(np.max(np.abs(act.inv(p) - divisor(act, x, y)))),
                    float(np.max(np.abs(act.mul(divisor(act, z, y), p) - divisor(act, z, x)))))
    return worst


def groupoid_axiom_residual(act: FreeTransitiveAction, g_mats, rng: np.random.Generator, samples: int = 200,
                            scale: float = 1.0) -> float:
    """Associativity, units, inverses and source/target compatibility on random arrows."""
    def diff(a: GroupoidArrow, b: GroupoidArrow) -> float:
        return max(float(np.max(np.abs(a.k - b.k))), float(np.max(np.abs(a.x - b.x))),
                   float(np.max(np.abs(a.A - b.A))))
    d = act.dim
    worst = 0.0
    for _ in range(samples):
        x = act.random_element(rng, scale)
        g1 = GroupoidArrow(act.random_element(rng, scale), x, sample_G(rng, g_mats, d))
        g2 = GroupoidArrow(act.random_element(rng, scale), g1.target(act), sample_G(rng, g_mats, d))
        g3 = GroupoidArrow(act.random_element(rng, scale), g2.target(act), sample_G(rng, g_mats, d))
        left = compose(act, compose(act, g3, g2), g1)
        right = compose(act, g3, compose(act, g2, g1))
        worst = max(worst, diff(left, right))
        worst = max(worst, diff(compose(act, unit_arrow(act, g1.target(act)), g1), g1),
                    diff(compose(act, g1, unit_arrow(act, x)), g1))
        inv = invert(act, g1)
        worst = max(worst, diff(compose(act, inv, g1), unit_arrow(act, x)),
                    diff(compose(act, g1, inv), unit_arrow(act, g1.target(act))))
        worst = max(worst, float(np.max(np.abs(compose(act, g2, g1).target(act) - g2.target(act)))))
    return worst
