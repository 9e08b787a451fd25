"""End-to-end acceptance criteria; each test prints one PASS/FAIL line (see the terminal summary)."""
import functools
import io
import time

import numpy as np
import pytest

from cartanlab import linalg as la
from cartanlab.algebra import AlmostLieAlgebra, is_lie, jacobi_witness, jacobiator, semidirect
from cartanlab.algebras import gl, heisenberg, so, sp_k1
from cartanlab.cli import run
from cartanlab.coframe import (ChartBox, FrameField, Scenario, VForm1, curvature_split_check, fd_order_ratio,
                               flatness_check, k_integrability_witness, random_poly_form, second_order_split_check)
from cartanlab.extensions import (canonical_extension, check_reductive, induced_quotient_bracket, jet2_algebra,
                                  reduction_tower, second_order_model, semidirect_iso_check)
from cartanlab.groupoid import (FreeTransitiveAction, build_reductive_extension, divisor_identity_residual,
                                groupoid_axiom_residual, holonomic_bisection_residual, multiplicativity_residual)

from conftest import random_algebra, random_rep

RESULTS: dict[int, str] = {}
XYZ = ("x", "y", "z")
CONTACT = [["0", "1", "0"], ["1", "0", "0"], ["-y", "0", "1"]]
CONTACT_FRAME = [["0", "1", "0"], ["1", "0", "y"], ["0", "0", "1"]]


def criterion(number: int, title: str, budget: float):
    def wrap(fn):
        @functools.wraps(fn)
        def test(*a, **kw):
            t0 = time.perf_counter()
            status, note = "FAIL", ""
            try:
                fn(*a, **kw)
                elapsed = time.perf_counter() - t0
                assert elapsed < budget, f"took {elapsed:.2f} s, budget {budget} s"
                status = "PASS"
            except AssertionError as e:
                note = f"  ({str(e).splitlines()[0] if str(e) else 'assertion failed'})"
                raise
            finally:
                elapsed = time.perf_counter() - t0
                line = f"criterion {number}: {status}  {title}  [{elapsed:.2f} s / {budget:g} s]{note}"
                RESULTS[number] = line
                print(line)
        return test
    return wrap


def _mats(m):
    return [np.array(la.to_float(a)) for a in m.matrices]


@criterion(1, "exact algebra suite", 1.0)
def test_c1_exact_algebra_suite():
    sp = sp_k1(1)
    algebras = [heisenberg(1), sp.algebra] + [gl(n).algebra for n in (1, 2, 3)] + \
        [so(n).algebra for n in (1, 2, 3)] + [jet2_algebra(n) for n in (1, 2)]
    for a in algebras:
        assert is_lie(a), a.name
    z = semidirect(sp.algebra, sp.standard_rep, heisenberg(1))
    w = jacobi_witness(z)
    assert w is not None and len(w) == 3
    assert not la.is_zero(jacobiator(z, *(la.unit(z.dim, i) for i in w)))


@criterion(2, "reductivity round trip on 100 random h x| k", 5.0)
def test_c2_round_trip():
    rng = np.random.default_rng(20)
    for _ in range(100):
        h = random_algebra(rng, int(rng.integers(1, 5)))
        k = random_algebra(rng, int(rng.integers(1, 5)))
        cte, sp = canonical_extension(h, random_rep(rng, h, k.dim), k)
        assert induced_quotient_bracket(cte, sp).sc == k.sc
        assert semidirect_iso_check(cte, sp)


@criterion(3, "second-order model reductive, tower order 2", 2.0)
def test_c3_second_order_model():
    for n in (1, 2):
        m = second_order_model(n)
        assert check_reductive(m.cte, m.splitting), n
        assert reduction_tower(m.pfaffian).order == 2, n


def _contact(k):
    sp = sp_k1(1)
    box = ChartBox.cube(XYZ, grid=9, fd_step=1e-4)
    return Scenario("contact", box, VForm1.parse(CONTACT, XYZ), VForm1.zero(6, XYZ), sp.algebra, k,
                    sp.standard_rep, FrameField.parse(CONTACT_FRAME, XYZ))


@criterion(4, "contact flatness: hei3 FLAT, abelian NOT-FLAT", 10.0)
def test_c4_contact_flatness():
    r = flatness_check(_contact(heisenberg(1)))
    assert r.verdict == "FLAT" and max(r.max_R, r.max_torsion_residual) <= 1e-6 and r.points == 729
    r = flatness_check(_contact(AlmostLieAlgebra.abelian(3)))
    assert r.verdict == "NOT-FLAT"
    assert r.worst_component == (3, 1, 2) and abs(r.worst_T - (-1)) <= 1e-6


@criterion(5, "curvature split identities on random scenarios", 30.0)
def test_c5_split_identities():
    rng = np.random.default_rng(50)
    sp = sp_k1(1)
    box = ChartBox.cube(XYZ, grid=9, fd_step=1e-4)
    for _ in range(20):
        tau, theta = random_poly_form(rng, 6, XYZ), random_poly_form(rng, 3, XYZ)
        r = curvature_split_check(tau, theta, sp.algebra, heisenberg(1), sp.standard_rep, box)
        assert r.ok(1e-8), r.max_discrepancy
    m = second_order_model(2)
    d21, d1, n = m.dims
    c2 = ("u", "v")
    box2 = ChartBox.cube(c2, grid=9, fd_step=1e-4)
    for _ in range(10):
        r = second_order_split_check(random_poly_form(rng, d21, c2), random_poly_form(rng, d1, c2),
                                     random_poly_form(rng, n, c2), m, box2)
        assert r.ok(1e-8), r.max_discrepancy


@criterion(6, "k-integrability witness and FD order", 10.0)
def test_c6_integrability():
    sc = _contact(heisenberg(1))
    assert k_integrability_witness(sc.frames, heisenberg(1), sc.box).verdict == "PASS"
    r = k_integrability_witness(sc.frames, AlmostLieAlgebra.abelian(3), sc.box)
    assert r.verdict == "FAIL" and r.witness == (1, 2)
    form = VForm1.parse([["sin(y)*exp(x)", "x^3*cos(y)", "0"], ["z*sin(x)", "0", "exp(y)*x"]], XYZ)
    ratio = fd_order_ratio(form, [0.3, -0.2, 0.4])
    assert 3.5 <= ratio <= 4.5, ratio


@criterion(7, "groupoid suite", 30.0)
def test_c7_groupoids():
    rng = np.random.default_rng(70)
    models = [(FreeTransitiveAction.translations(2), gl(2)), (FreeTransitiveAction.heisenberg(1), sp_k1(1))]
    for act, g in models:
        mats = _mats(g)
        assert divisor_identity_residual(act, rng, 1000) <= 1e-12
        assert groupoid_axiom_residual(act, mats, rng, 200) <= 1e-12
        pts = rng.uniform(-1, 1, (27, act.dim))
        for _ in range(20):
            assert holonomic_bisection_residual(act, act.random_element(rng), pts) <= 1e-6
        assert multiplicativity_residual(act, mats, rng, 200).max_defect <= 1e-5
    sp = sp_k1(1)
    ind = build_reductive_extension(FreeTransitiveAction.heisenberg(1), sp.algebra, _mats(sp))
    assert ind.exact and ind.k.sc == heisenberg(1).sc
    assert check_reductive(ind.cte, ind.splitting)


def _json(*argv):
    out = io.StringIO()
    run(list(argv) + ["--json"], out, io.StringIO())
    return out.getvalue().encode()


@criterion(8, "deterministic JSON reports", 60.0)
def test_c8_determinism():
    runs = [("groupoid-check", "heisenberg_groupoid", "--seed", "11"),
            ("groupoid-check", "translations_groupoid", "--seed", "11"),
            ("check-flatness", "contact_abelian"),
            ("split-check", "contact_hei"),
            ("check-extension", "sp11_model"),
            ("tower", "jet2_model")]
    for argv in runs:
        assert _json(*argv) == _json(*argv), argv


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
