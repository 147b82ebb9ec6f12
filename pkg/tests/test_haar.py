import random

import numpy as np
import pytest
from gmpy2 import mpq

from suq2.algebra import Element, basis_monomials, random_element
from suq2.bundle import gns_truncation
from suq2.haar import (
    HaarState,
    haar_element,
    haar_monomial,
    invariance_residuals,
    recursion_check_neg1,
    recursion_identity_neg1,
)
from suq2.model import haar_quadrature
from suq2.scalars import ParameterError, real_imag


@pytest.mark.parametrize("m", range(7))
def test_values_at_minus_one(m):
    assert haar_monomial(0, m, m, -1) == mpq(1, m + 1)


def test_value_at_minus_half():
    assert haar_monomial(0, 1, 1, "-1/2") == mpq(4, 5)


def test_off_diagonal_vanishes():
    for k, l, m in basis_monomials(2):
        if k != 0 or l != m:
            assert haar_monomial(k, l, m, "-1/2") == 0


def test_weighted_trace_oracle():
    """h_q(x) = (1-q^2) sum_n q^(2n) <e_n, pi(x) e_n>, averaged over the gamma phase."""
    q = mpq(-1, 2)
    r = random.Random(5)
    N = 60
    phases = np.exp(2j * np.pi * np.arange(8) / 8)
    weights = (1 - float(q) ** 2) * float(q) ** (2 * np.arange(N))
    for _ in range(20):
        x = random_element(r, q, 3)
        est = np.mean([np.dot(weights, np.diag(gns_truncation(x, N, lam))) for lam in phases])
        assert abs(est - complex(haar_element(x))) < 1e-12


def test_classical_quadrature_oracle():
    for m in range(5):
        val = haar_quadrature(lambda a, c: np.abs(c) ** (2 * m), 16)
        assert abs(val - float(haar_monomial(0, m, m, 1))) < 1e-12


@pytest.mark.parametrize("q", [-1, mpq(-1, 2), mpq(-3, 5)])
def test_invariance(q):
    h = HaarState(q)
    for mn in basis_monomials(3):
        r1, r2 = invariance_residuals(Element.monomial(q, *mn), h)
        assert not r1 and not r2, mn


def test_wrong_exponent_detected():
    q = mpq(-1, 2)
    bad = HaarState.with_exponent(q, 1)
    r1, r2 = invariance_residuals(Element.monomial(q, 0, 1, 1), bad)
    assert r1 or r2
    good = HaarState.with_exponent(q, 2)
    r1, r2 = invariance_residuals(Element.monomial(q, 0, 1, 1), good)
    assert not r1 and not r2


@pytest.mark.parametrize("q", [-1, mpq(-1, 2)])
def test_perturbation_detected(q):
    h = HaarState.perturbed(q, (0, 1, 1), mpq(1, 100))
    found = False
    for mn in basis_monomials(2):
        r1, r2 = invariance_residuals(Element.monomial(q, *mn), h)
        found |= bool(r1) or bool(r2)
    assert found


@pytest.mark.parametrize("q", [-1, mpq(-1, 2), mpq(-3, 5)])
def test_positivity(q):
    r = random.Random(11)
    for _ in range(100):
        x = random_element(r, q, 2)
        v = haar_element(x.star() * x)
        re, im = real_imag(v)
        assert im == 0 and re >= 0


@pytest.mark.parametrize("m", range(1, 9))
def test_recursion(m):
    assert recursion_check_neg1(m) == 0
    assert recursion_identity_neg1(m) == {0: mpq(1, m + 1)}


def test_recursion_detects_wrong_values():
    h = HaarState(-1, lambda mn: mpq(1, 2 * mn.m + 1) if mn.k == 0 and mn.l == mn.m else 0)
    assert recursion_check_neg1(2, h) != 0


def test_recursion_preconditions():
    with pytest.raises(ValueError):
        recursion_check_neg1(0)
    with pytest.raises(ParameterError):
        recursion_check_neg1(1, HaarState("-1/2"))


def test_state_element_q_mismatch():
    with pytest.raises(ParameterError):
        HaarState(-1).element(Element.scalar("-1/2"))


def test_mode():
    assert HaarState(-1).mode == "boundary"
    assert HaarState("-1/2").mode == "generic"
