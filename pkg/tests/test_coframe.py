import numpy as np
import pytest

from cartanlab import linalg as la
from cartanlab.algebra import AlmostLieAlgebra, LinearRep
from cartanlab.algebras import gl, sp_k1
from cartanlab.coframe import (BoundaryError, ChartBox, DegenerateFrame, FrameField, Scenario, SingularCoframe,
                               VForm1, assemble_lift, canonical_lift, curvature, curvature_split_check, fd_d,
                               fd_order_ratio, flatness_check, k_integrability_witness, lie_bracket_frames,
                               random_poly_form, second_order_split_check, torsion_curvature, wedge_action,
                               wedge_bracket)
from cartanlab.extensions import second_order_model

XYZ = ("x", "y", "z")
CONTACT = [["0", "1", "0"], ["1", "0", "0"], ["-y", "0", "1"]]
CONTACT_FRAME = [["0", "1", "0"], ["1", "0", "y"], ["0", "0", "1"]]
H = 1e-4


def _trivial(m):
    a = AlmostLieAlgebra.abelian(1)
    return LinearRep.trivial(a, m)


def contact_scenario(k):
    sp = sp_k1(1)
    box = ChartBox.cube(XYZ, grid=9, fd_step=H)
    return Scenario("contact", box, VForm1.parse(CONTACT, XYZ), VForm1.zero(6, XYZ), sp.algebra, k,
                    sp.standard_rep, FrameField.parse(CONTACT_FRAME, XYZ))


# --- exterior derivative and wedges -------------------------------------------

def test_fd_d_exact_form_is_closed():
    eta = VForm1.parse([["y", "x"]], ("x", "y"))
    pts = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    assert np.max(np.abs(fd_d(eta, pts, H))) <= 1e-8


def test_fd_d_x_dy():
    eta = VForm1.parse([["0", "x"]], ("x", "y"))
    d = fd_d(eta, [0.3, -0.2], H)
    assert d[0, 0, 1] == pytest.approx(1, abs=1e-8)
    assert d[0, 1, 0] == pytest.approx(-1, abs=1e-8)


def test_fd_d_contact_form():
    theta = VForm1.parse(CONTACT, XYZ)
    d = fd_d(theta, [0.1, 0.5, -0.3], H)
    assert d[2, 0, 1] == pytest.approx(1, abs=1e-8)
    assert np.max(np.abs(d[:2])) <= 1e-8


def test_fd_d_respects_box():
    box = ChartBox.cube(("x", "y"))
    eta = VForm1.parse([["x", "y"]], ("x", "y"))
    with pytest.raises(BoundaryError):
        fd_d(eta, [1.0, 0.0], H, box)


def test_wedges():
    g = gl(2)
    zero_tau = np.zeros((2, 4, 2))
    theta = np.random.default_rng(1).normal(size=(2, 2, 2))
    assert np.all(wedge_action(zero_tau, theta, g.standard_rep) == 0)
    assert np.all(wedge_bracket(zero_tau, g.algebra) == 0)
    const = np.ones((3, 2))
    assert np.all(wedge_bracket(const, AlmostLieAlgebra.abelian(3)) == 0)
    # tau = x E11 dx, theta = (dy, 0): (tau ^ theta)(e1, e2) = x E11 (1, 0) = (x, 0)
    x = 0.7
    tau = np.zeros((4, 2))
    tau[g.algebra.basis_names.index("E11"), 0] = x
    th = np.array([[0.0, 1.0], [0.0, 0.0]])
    w = wedge_action(tau, th, g.standard_rep)
    assert np.allclose(w[:, 0, 1], [x, 0]) and np.allclose(w[:, 1, 0], [-x, 0])


def test_wedge_bracket_hei3(hei3):
    eta = np.eye(3)
    w = wedge_bracket(eta, hei3)
    assert w[2, 0, 1] == 1 and w[2, 1, 0] == -1
    assert np.count_nonzero(w) == 2


# --- torsion and curvature ------------------------------------------------------

def test_identity_coframe_torsion_free():
    box = ChartBox.cube(XYZ)
    theta = VForm1.parse([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], XYZ)
    T, R = torsion_curvature(theta, VForm1.zero(1, XYZ), _trivial(3), box, [0.1, 0.2, 0.3])
    assert np.max(np.abs(T)) <= 1e-10 and np.max(np.abs(R)) <= 1e-10


def test_contact_torsion():
    sp = sp_k1(1)
    box = ChartBox.cube(XYZ)
    T, R = torsion_curvature(VForm1.parse(CONTACT, XYZ), VForm1.zero(6, XYZ), sp.standard_rep, box,
                             [0.2, -0.4, 0.5])
    assert T[2, 0, 1] == pytest.approx(-1, abs=1e-6)
    T[2, 0, 1] = T[2, 1, 0] = 0
    assert np.max(np.abs(T)) <= 1e-6 and np.max(np.abs(R)) <= 1e-12


def test_scaled_coframe_torsion():
    box = ChartBox.cube(("x", "y"))
    p = [0.3, 0.4]
    # e^x dx is closed, so the torsion vanishes
    T, _ = torsion_curvature(VForm1.parse([["exp(x)", "0"], ["0", "1"]], ("x", "y")), VForm1.zero(1, ("x", "y")),
                             _trivial(2), box, p)
    assert np.max(np.abs(T)) <= 1e-7
    # d(e^y dx) = -e^y dx^dy and E_1 = e^-y d/dx, so T^1_12 = -1
    T, _ = torsion_curvature(VForm1.parse([["exp(y)", "0"], ["0", "1"]], ("x", "y")), VForm1.zero(1, ("x", "y")),
                             _trivial(2), box, p)
    assert T[0, 0, 1] == pytest.approx(-1, abs=1e-7)


def test_singular_coframe():
    box = ChartBox.cube(("x", "y"))
    theta = VForm1.parse([["x", "0"], ["0", "1"]], ("x", "y"))
    with pytest.raises(SingularCoframe):
        torsion_curvature(theta, VForm1.zero(1, ("x", "y")), _trivial(2), box, [0.0, 0.5])


# --- flatness -------------------------------------------------------------------

def test_euclidean_flat():
    box = ChartBox.cube(XYZ, grid=5)
    theta = VForm1.parse([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], XYZ)
    g = gl(3)
    sc = Scenario("euclid", box, theta, VForm1.zero(9, XYZ), g.algebra, AlmostLieAlgebra.abelian(3), g.standard_rep)
    assert flatness_check(sc).verdict == "FLAT"


def test_contact_flat_for_heisenberg(hei3):
    r = flatness_check(contact_scenario(hei3))
    assert r.flat and r.max_R <= 1e-6 and r.max_torsion_residual <= 1e-6
    assert r.points == 729
    assert not r.z_is_lie


def test_contact_not_flat_for_abelian():
    r = flatness_check(contact_scenario(AlmostLieAlgebra.abelian(3)))
    assert r.verdict == "NOT-FLAT"
    assert r.worst_component == (3, 1, 2)
    assert abs(r.worst_T + 1) <= 1e-6
    assert all(type(i) is int for i in r.worst_component)


def test_curvature_report(hei3, sp11, sp11_hei3):
    sc = contact_scenario(hei3)
    eta = canonical_lift(sc.tau, sc.theta)
    box = ChartBox.cube(XYZ, grid=4)
    assert curvature(eta, sp11_hei3, box, h_dim=6).flat
    from cartanlab.algebra import semidirect
    z_ab = semidirect(sp11.algebra, sp11.standard_rep, AlmostLieAlgebra.abelian(3))
    rep = curvature(eta, z_ab, box, h_dim=6)
    assert not rep.flat and rep.max_norm == pytest.approx(1, abs=1e-6)


def test_threads_do_not_change_results(hei3):
    sc = contact_scenario(AlmostLieAlgebra.abelian(3))
    a, b = flatness_check(sc, threads=1), flatness_check(sc, threads=4)
    assert (a.max_R, a.max_torsion_residual, a.worst_point, a.worst_component) == \
        (b.max_R, b.max_torsion_residual, b.worst_point, b.worst_component)


# --- lifts and splits -------------------------------------------------------------

def test_assemble_lift():
    rng = np.random.default_rng(4)
    tau, theta = random_poly_form(rng, 2, XYZ), random_poly_form(rng, 3, XYZ)
    i = la.mat([[1, 0], [0, 1], [0, 0], [0, 0], [0, 0]])
    r = la.mat([[0, 0, 0], [0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    pts = rng.uniform(-1, 1, (10, 3))
    eta = assemble_lift(tau, theta, i, r)
    assert np.allclose(eta.values(pts), canonical_lift(tau, theta).values(pts))
    eta0 = assemble_lift(VForm1.zero(2, XYZ), theta, i, r)
    assert np.allclose(eta0.values(pts)[:, :2], 0) and np.allclose(eta0.values(pts)[:, 2:], theta.values(pts))
    eta1 = assemble_lift(tau, VForm1.zero(3, XYZ), i, r)
    assert np.allclose(eta1.values(pts)[:, :2], tau.values(pts)) and np.allclose(eta1.values(pts)[:, 2:], 0)
    # a shifted right splitting mixes theta into the h block
    r2 = la.mat([[1, 0, 0], [0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    eta2 = assemble_lift(tau, theta, i, r2)
    assert np.allclose(eta2.values(pts)[:, 0], tau.values(pts)[:, 0] + theta.values(pts)[:, 0])


def test_split_with_zero_tau(hei3, sp11):
    box = ChartBox.cube(XYZ, grid=4)
    theta = random_poly_form(np.random.default_rng(5), 3, XYZ)
    r = curvature_split_check(VForm1.zero(6, XYZ), theta, sp11.algebra, hei3, sp11.standard_rep, box)
    assert r.max_discrepancy == 0


def test_split_random_polynomials(hei3, sp11):
    rng = np.random.default_rng(6)
    box = ChartBox.cube(XYZ, grid=5)
    for _ in range(3):
        tau, theta = random_poly_form(rng, 6, XYZ), random_poly_form(rng, 3, XYZ)
        r = curvature_split_check(tau, theta, sp11.algebra, hei3, sp11.standard_rep, box)
        assert r.ok(1e-8), r.max_discrepancy


def test_split_abelian():
    rng = np.random.default_rng(8)
    box = ChartBox.cube(XYZ, grid=4)
    a2, a3 = AlmostLieAlgebra.abelian(2), AlmostLieAlgebra.abelian(3)
    tau, theta = random_poly_form(rng, 2, XYZ), random_poly_form(rng, 3, XYZ)
    assert curvature_split_check(tau, theta, a2, a3, LinearRep.trivial(a2, 3), box).ok()


def test_second_order_split():
    rng = np.random.default_rng(9)
    m = second_order_model(2)
    c2 = ("u", "v")
    box = ChartBox.cube(c2, grid=5)
    d21, d1, n = m.dims
    z = lambda k: VForm1.zero(k, c2)
    assert second_order_split_check(z(d21), z(d1), z(n), m, box).max_discrepancy == 0
    tau2, tau1, theta1 = random_poly_form(rng, d21, c2), random_poly_form(rng, d1, c2), random_poly_form(rng, n, c2)
    r = second_order_split_check(tau2, tau1, theta1, m, box)
    assert r.ok(1e-8)
    # the insertion term matters: dropping it leaves a visible defect
    assert r.naive_discrepancy > 1e-3
    r0 = second_order_split_check(z(d21), tau1, theta1, m, box)
    assert r0.ok(1e-8) and r0.naive_discrepancy <= 1e-8


# --- frames ---------------------------------------------------------------------

def test_bracket_examples():
    coord = FrameField.parse([["1", "0"], ["0", "1"]], ("x", "y"))
    assert np.max(np.abs(lie_bracket_frames(coord, [0.1, 0.2], H))) == 0
    F = FrameField.parse(CONTACT_FRAME, XYZ)
    B = lie_bracket_frames(F, [0.3, -0.1, 0.2], H)
    assert np.allclose(B[0, 1], [0, 0, 1], atol=1e-8)
    B[0, 1] = B[1, 0] = 0
    assert np.max(np.abs(B)) <= 1e-8
    G = FrameField.parse([["x", "0"], ["1", "0"]], ("x", "y"))
    assert np.allclose(lie_bracket_frames(G, [0.4, 0.0], H)[0, 1], [-1, 0], atol=1e-8)


def test_integrability(hei3):
    box = ChartBox.cube(XYZ, grid=5)
    coord = FrameField.parse([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], XYZ)
    assert k_integrability_witness(coord, AlmostLieAlgebra.abelian(3), box).passed
    F = FrameField.parse(CONTACT_FRAME, XYZ)
    assert k_integrability_witness(F, hei3, box).verdict == "PASS"
    r = k_integrability_witness(F, AlmostLieAlgebra.abelian(3), box)
    assert r.verdict == "FAIL" and r.witness == (1, 2)


def test_degenerate_frame(hei3):
    box = ChartBox.cube(XYZ, grid=3)
    F = FrameField.parse([["1", "0", "0"], ["1", "0", "0"], ["0", "0", "1"]], XYZ)
    with pytest.raises(DegenerateFrame):
        k_integrability_witness(F, hei3, box)


def test_fd_second_order():
    eta = VForm1.parse([["sin(y)*exp(x)", "x^3*cos(y)"]], ("x", "y"))
    assert 3.5 <= fd_order_ratio(eta, [0.3, 0.2]) <= 4.5


def test_random_poly_form_prints_cleanly():
    import re
    f = random_poly_form(np.random.default_rng(1), 4, XYZ)
    assert not any(re.search(r"(?<![\d./])1\*", s) for row in f.pretty() for s in row)
