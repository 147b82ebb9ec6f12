"""Acceptance criteria 1-14.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  Runtime limits are asserted inside the tests.
"""

import random
import time

import numpy as np
import pytest
from gmpy2 import mpq

from suq2 import ktheory as kt
from suq2 import model
from suq2.algebra import AlgMatrix, Element, basis_monomials, generators, make_uq, mat_star, random_element, word
from suq2.bundle import QGrid, haar_profile, norm_lower_bound, relation_residuals
from suq2.haar import HaarState, haar_monomial, invariance_residuals, recursion_check_neg1
from suq2.hopf import closed_form_neg1, coproduct, coproduct_monomial, delta_left, delta_right, tensor_star
from suq2.suites import random_configuration

HALF = mpq(-1, 2)


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


@pytest.mark.criterion(1)
def test_criterion_01_exact_haar_values():
    with Timer(1):
        for m in range(7):
            assert haar_monomial(0, m, m, -1) == mpq(1, m + 1)
        assert haar_monomial(0, 1, 1, HALF) == mpq(4, 5)


@pytest.mark.criterion(2)
def test_criterion_02_exact_invariance():
    with Timer(60):
        for q in (-1, HALF, mpq(-3, 5)):
            h = HaarState(q)
            for mn in basis_monomials(3):
                r1, r2 = invariance_residuals(Element.monomial(q, *mn), h)
                assert not r1 and not r2, (q, mn)


@pytest.mark.criterion(3)
def test_criterion_03_exponent_resolution():
    with Timer(5):
        x = Element.monomial(HALF, 0, 1, 1)
        r1, r2 = invariance_residuals(x, HaarState.with_exponent(HALF, 1))
        assert r1 or r2
        good = HaarState.with_exponent(HALF, 2)
        for mn in basis_monomials(3):
            r1, r2 = invariance_residuals(Element.monomial(HALF, *mn), good)
            assert not r1 and not r2


@pytest.mark.criterion(4)
def test_criterion_04_recursion():
    with Timer(1):
        for m in range(1, 9):
            assert recursion_check_neg1(m) == 0


@pytest.mark.criterion(5)
def test_criterion_05_trace_state():
    with Timer(30):
        for mn in basis_monomials(3):
            x = Element.monomial(-1, *mn)
            assert abs(model.haar_trace_state(x, 32) - float(haar_monomial(*mn, -1))) <= 1e-8, mn


@pytest.mark.criterion(6)
def test_criterion_06_unitarity():
    with Timer(1):
        for q in (-1, HALF, 1):
            U = make_uq(q)
            assert U @ mat_star(U) == AlgMatrix.identity(q)
            assert mat_star(U) @ U == AlgMatrix.identity(q)


@pytest.mark.criterion(7)
def test_criterion_07_fixed_point_algebra():
    with Timer(60):
        rng = random.Random(0)
        a, c = model.random_sphere_points(np.random.default_rng(0), 1000)
        probe = model.MatFun.constant([[1, 2j], [0, -1]])
        for _ in range(50):
            x = random_element(rng, -1, 3)
            F = model.phi_matfun(x)
            assert model.symmetry_decomposition_check(F, a, c) <= 1e-12
            E = model.conditional_expectation(F)
            assert np.abs(E(a, c) - F(a, c)).max() <= 1e-12
            EG = model.conditional_expectation(F @ probe)
            assert np.abs(model.conditional_expectation(EG)(a, c) - EG(a, c)).max() <= 1e-12


@pytest.mark.criterion(8)
def test_criterion_08_spectrum():
    with Timer(30):
        nprng = np.random.default_rng(0)
        a, c = model.random_sphere_points(nprng, 100)
        for ai, ci in zip(a, c):
            p = model.SpherePoint(ai, ci)
            for g in model.GROUP:
                assert model.intertwiner_check(p, g) <= 1e-12
        for _ in range(10):
            M, t = random_configuration(nprng, max_m=4)
            assert len(M) <= 4
            F = model.separating_element(M, t)
            on_m, at_t = model.separation_residuals(F, M, t)
            assert on_m <= 1e-12 and at_t > 1e-6


@pytest.mark.criterion(9)
def test_criterion_09_a2_witnesses():
    with Timer(10):
        assert kt.projection_residual(kt.P0, 1001) <= 1e-12
        assert kt.projection_residual(kt.Q0, 1001) <= 1e-12
        for (which, a, c), M in kt.ENDPOINT_TABLE.items():
            f = kt.p_tilde if which == "p" else kt.q_tilde
            assert np.array_equal(f(a, c), M)
        assert [kt.det_winding(kt.exp_loop(j)) for j in (1, 2, 3, 4)] == [-1, -1, 1, 1]


@pytest.mark.criterion(10)
def test_criterion_10_bott_lift():
    with Timer(5):
        grid = kt.disk_grid(100)
        u = kt.bott_lift(grid)
        assert np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - np.eye(4)).max() <= 1e-14
        for z in np.exp(2j * np.pi * np.arange(32) / 32):
            assert np.abs(kt.bott_lift(z) - np.diag([z, 1, np.conj(z), 1])).max() <= 1e-14
        assert kt.bott_projection_check(grid) <= 1e-12


@pytest.mark.criterion(11)
def test_criterion_11_a3_witnesses():
    with Timer(10):
        for w in "pq":
            assert np.abs(kt.a3_lift(w, 1j, 0)).max() == 0
            assert np.abs(kt.a3_lift(w, 0, 1j)).max() == 0
        for phi in np.linspace(0.01, np.pi - 0.01, 99):
            a = np.exp(1j * phi)
            lam = kt.lam(a)
            if a.real > 1e-12:
                ep, eq = np.diag([lam, 1]), np.diag([1, lam])
            elif a.real < -1e-12:
                ep, eq = np.diag([1, lam]), np.diag([lam, 1])
            else:
                ep = eq = np.eye(2)
            assert np.abs(kt.a3_exp("p", a, 0) - ep).max() <= 1e-12
            assert np.abs(kt.a3_exp("q", a, 0) - eq).max() <= 1e-12
        for phi in np.linspace(0, np.pi, 61):
            c = np.exp(1j * phi)
            assert np.abs(kt.a3_exp("p", 0, c) - kt.a3_exp("q", 0, c)).max() <= 1e-12
        wp, wq = kt.a3_winding_pair("p"), kt.a3_winding_pair("q")
        assert abs(wp[0]) == 1 and wp[1] == -wp[0]
        assert abs(wq[0]) == 1 and wq[1] == -wq[0]
        assert wq == (-wp[0], -wp[1])


@pytest.mark.criterion(12)
def test_criterion_12_degree_certificate():
    with Timer(600):
        assert kt.phi_u_degree(48) == 2
        for f in (kt.u1, kt.x_unitary, kt.y_unitary):
            value = kt.degree3_value(f, 48)
            assert abs(value - 1) <= 0.05
            assert kt.degree3(f, 48) == 1


@pytest.mark.criterion(13)
def test_criterion_13_haar_limit():
    violations = []
    with Timer(60):
        for q, tol in (("-9/10", 0.06), ("-99/100", 0.006), ("-999/1000", 0.0006)):
            for m in range(5):
                (v,) = haar_profile(0, m, m, QGrid([q]))
                dev = abs(v - mpq(1, m + 1))
                if dev > tol:
                    violations.append(f"q={q} m={m} deviation {float(dev):.6f} > {tol}")
    assert not violations, "; ".join(violations)


@pytest.mark.criterion(13)
def test_criterion_13_truncated_relations():
    with Timer(60):
        for q in ("-1/2", "-3/5", "-9/10"):
            for N in (10, 20, 40):
                assert max(relation_residuals(q, N).values()) <= 1e-12


@pytest.mark.criterion(13)
def test_criterion_13_norm_monotonicity():
    with Timer(60):
        rng = random.Random(0)
        for q in ("-1/2", "-9/10", "-99/100"):
            elements = [Element.monomial(q, *mn) for mn in ((1, 0, 0), (0, 1, 0), (0, 1, 1), (-2, 1, 0), (3, 0, 2))]
            elements += [random_element(rng, q, 3) for _ in range(5)]
            for x in elements:
                bounds = [norm_lower_bound(x, N) for N in (10, 20, 40)]
                assert bounds[0] <= bounds[1] + 1e-12 and bounds[1] <= bounds[2] + 1e-12


@pytest.mark.criterion(14)
@pytest.mark.parametrize("seed", range(5))
def test_criterion_14_property_suite(seed):
    with Timer(60):
        for q in (-1, HALF):
            rng = random.Random(seed)
            for _ in range(200):
                x, y, z = (random_element(rng, q, 3, box=True) for _ in range(3))
                assert (x * y) * z == x * (y * z)
                assert x.star().star() == x
                assert (x * y).star() == y.star() * x.star()
            for _ in range(100):
                x, y = random_element(rng, q, 3), random_element(rng, q, 3)
                assert coproduct(x * y) == coproduct(x) * coproduct(y)
                assert coproduct(x.star()) == tensor_star(coproduct(x))
            one = Element.scalar(q)
            for _ in range(20):
                x = random_element(rng, q, 3, box=True)
                assert one * x == x == x * one


@pytest.mark.criterion(14)
def test_criterion_14_structural():
    with Timer(120):
        for q in (-1, HALF):
            g = generators(q)
            a, A, c, C = g["a"], g["A"], g["g"], g["G"]
            qq = a.q
            one = Element.scalar(q)
            assert A * a + C * c == one
            assert a * A + (c * C).scale(qq * qq) == one
            assert a * c == (c * a).scale(qq) and a * C == (C * a).scale(qq) and c * C == C * c
            for mn in basis_monomials(3):
                D = coproduct_monomial(q, mn)
                assert delta_left(D) == delta_right(D)
        a2, g2 = word(-1, "aa"), word(-1, "gg")
        for mn in basis_monomials(3):
            x = Element.monomial(-1, *mn)
            assert a2 * x == x * a2 and g2 * x == x * g2
        for k in range(4):
            for l in range(4):
                for m in range(4):
                    assert closed_form_neg1(k, l, m) == coproduct_monomial(-1, (k, l, m))
