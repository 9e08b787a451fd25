import numpy as np
import pytest

from cartanlab import linalg as la
from cartanlab.algebra import AlmostLieAlgebra, is_lie
from cartanlab.algebras import gl, heisenberg, sp_k1
from cartanlab.groupoid import (FreeTransitiveAction, NonComposable, SingularDifferential,
                                arrow, build_reductive_extension, compose, divisor, divisor_identity_residual,
                                groupoid_axiom_residual, holonomic_bisection_residual, infinitesimal_rep,
                                invert, isotropy_action, multiplicativity_defect, multiplicativity_residual,
                                pfaffian_omega, unit_arrow)

TR2 = FreeTransitiveAction.translations(2)
HEI = FreeTransitiveAction.heisenberg(1)


def _mats(m):
    return [np.array(la.to_float(a)) for a in m.matrices]


def test_divisor_translations():
    y, x = np.array([1.0, 2.0]), np.array([-0.5, 4.0])
    assert np.array_equal(divisor(TR2, y, x), y - x)


@pytest.mark.parametrize("act", [HEI, FreeTransitiveAction.heisenberg(2), FreeTransitiveAction.translations(3)])
def test_divisor_matrix_oracle(act):
    rng = np.random.default_rng(0)
    for _ in range(20):
        x, y = act.random_element(rng), act.random_element(rng)
        M = act.as_matrix(y) @ np.linalg.inv(act.as_matrix(x))
        assert np.allclose(act.as_matrix(divisor(act, y, x)), M, atol=1e-13)
        assert np.allclose(divisor(act, x, x), act.identity)


def test_group_law_matches_matrices():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = HEI.random_element(rng), HEI.random_element(rng)
        assert np.allclose(HEI.as_matrix(HEI.mul(a, b)), HEI.as_matrix(a) @ HEI.as_matrix(b))
        assert np.allclose(HEI.from_matrix(HEI.as_matrix(a)), a)


def test_compose():
    rng = np.random.default_rng(2)
    x = np.array([0.3, -0.2])
    k1, k2 = np.array([1.0, 2.0]), np.array([-3.0, 0.5])
    A1, A2 = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
    g1 = arrow(k1, x, A1)
    g2 = arrow(k2, g1.target(TR2), A2)
    g = compose(TR2, g2, g1)
    assert np.allclose(g.k, k1 + k2) and np.allclose(g.x, x) and np.allclose(g.A, A2 @ A1)
    u = compose(TR2, unit_arrow(TR2, g1.target(TR2)), g1)
    assert np.allclose(u.k, g1.k) and np.allclose(u.A, g1.A)
    with pytest.raises(NonComposable):
        compose(TR2, g1, g1)


def test_compose_heisenberg_matrix():
    rng = np.random.default_rng(3)
    x, k1, k2 = (HEI.random_element(rng) for _ in range(3))
    g1 = arrow(k1, x, np.eye(3))
    g2 = arrow(k2, g1.target(HEI), np.eye(3))
    g = compose(HEI, g2, g1)
    assert np.allclose(HEI.as_matrix(g.k), HEI.as_matrix(k2) @ HEI.as_matrix(k1))
    gi = invert(HEI, g)
    e = compose(HEI, gi, g)
    assert np.allclose(e.k, 0) and np.allclose(e.A, np.eye(3))


def test_omega_examples():
    rng = np.random.default_rng(4)
    v1, v2 = rng.normal(size=2), rng.normal(size=2)
    g = arrow([0.5, 1.0], [0.2, 0.1], np.eye(2))
    assert np.allclose(pfaffian_omega(TR2, g, v1, v2, np.zeros((2, 2))), v1)
    gh = arrow(HEI.random_element(rng), HEI.random_element(rng), np.eye(3))
    assert np.allclose(pfaffian_omega(HEI, gh, np.zeros(3), np.zeros(3)), 0)
    g0 = arrow([0.4, -0.7, 0.3], np.zeros(3), np.eye(3))
    assert np.max(np.abs(pfaffian_omega(HEI, g0, np.zeros(3), rng.normal(size=3)))) <= 1e-8


def test_holonomic_bisections():
    rng = np.random.default_rng(5)
    pts2, pts3 = rng.uniform(-1, 1, (27, 2)), rng.uniform(-1, 1, (27, 3))
    assert holonomic_bisection_residual(TR2, [2.0, -1.0], pts2) <= 1e-12
    assert holonomic_bisection_residual(HEI, [1.0, 0.0, 0.0], pts3) <= 1e-6
    assert holonomic_bisection_residual(HEI, HEI.identity, pts3) <= 1e-10


def test_holonomic_detects_wrong_matrix():
    # a constant-k section with A != I is not holonomic
    g = arrow([0.5, 0.0], [0.1, 0.1], 2 * np.eye(2))
    assert np.max(np.abs(pfaffian_omega(TR2, g, np.zeros(2), np.array([1.0, 0.0])))) > 0.5


def test_multiplicativity_translations_identity():
    rng = np.random.default_rng(6)
    r = multiplicativity_residual(TR2, None, rng, samples=50)
    assert r.max_defect <= 1e-10


def test_multiplicativity_zero_tangents():
    rng = np.random.default_rng(7)
    g1 = arrow(HEI.random_element(rng), HEI.random_element(rng), np.eye(3))
    g2 = arrow(HEI.random_element(rng), g1.target(HEI), np.diag([2.0, 0.5, 1.0]))
    z = np.zeros(3)
    assert multiplicativity_defect(HEI, g2, g1, z, z, z) == 0


def test_multiplicativity_heisenberg():
    rng = np.random.default_rng(8)
    r = multiplicativity_residual(HEI, _mats(sp_k1(1)), rng, samples=60)
    assert r.max_defect <= 1e-5
    # the orbit-map form of the arrow action is not multiplicative on the Heisenberg model
    assert r.max_literal_defect > 1e-2


def test_literal_action_agrees_for_translations():
    rng = np.random.default_rng(9)
    r = multiplicativity_residual(TR2, _mats(gl(2)), rng, samples=40)
    assert r.max_defect <= 1e-10 and r.max_literal_defect <= 1e-10


def test_isotropy_action():
    rng = np.random.default_rng(10)
    A = np.array([[2.0, 1.0], [0.0, 1.0]])
    k = np.array([0.3, -0.4])
    assert np.allclose(isotropy_action(TR2, A, k), A @ k)
    kh = HEI.random_element(rng)
    assert np.allclose(HEI.act(kh, HEI.x0), kh)
    assert np.allclose(isotropy_action(HEI, np.eye(3), kh), kh)
    B = np.array([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.2, 0.0, 1.5]])
    C = np.array([[0.8, 0.0, 0.0], [0.3, 1.0, 0.0], [0.0, 0.0, 1.0]])
    lhs = isotropy_action(HEI, B, isotropy_action(HEI, C, kh))
    assert np.allclose(lhs, isotropy_action(HEI, B @ C, kh))
    with pytest.raises(SingularDifferential):
        isotropy_action(HEI, np.zeros((3, 3)), kh)


def test_infinitesimal_rep_translations():
    g = gl(2)
    rep = infinitesimal_rep(TR2, g.algebra, _mats(g))
    assert rep.matrices == tuple(g.matrices)


def test_build_extension_translations():
    for n in (1, 2, 3):
        g = gl(n)
        ind = build_reductive_extension(FreeTransitiveAction.translations(n), g.algebra, _mats(g))
        assert ind.exact and ind.reductive and ind.z_is_lie
        assert all(x == 0 for m in ind.k.sc for r in m for x in r)


def test_build_extension_heisenberg():
    sp = sp_k1(1)
    ind = build_reductive_extension(HEI, sp.algebra, _mats(sp))
    assert ind.exact
    assert np.max(np.abs(ind.k_float - np.array(heisenberg(1).float_sc()))) <= 1e-6
    assert ind.k.sc == heisenberg(1).sc
    assert ind.reductive
    assert ind.z_is_lie is False


def test_build_extension_trivial_g():
    zero = AlmostLieAlgebra(0, (), (), "0")
    ind = build_reductive_extension(HEI, zero, [])
    assert ind.exact and ind.cte.z.sc == heisenberg(1).sc


@pytest.mark.parametrize("act,g", [(TR2, gl(2)), (HEI, sp_k1(1))])
def test_groupoid_identities(act, g):
    rng = np.random.default_rng(11)
    assert divisor_identity_residual(act, rng, 300) <= 1e-12
    assert groupoid_axiom_residual(act, _mats(g), rng, 100) <= 1e-12


def test_heisenberg_algebra_is_lie():
    sp = sp_k1(1)
    ind = build_reductive_extension(HEI, sp.algebra, _mats(sp))
    assert is_lie(ind.k)
