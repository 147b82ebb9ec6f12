import random

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from suq2.algebra import Element, Monomial, basis_monomials, random_element
from suq2.hopf import (
    TensorElement,
    apply_left_state,
    closed_form_neg1,
    coproduct,
    coproduct_monomial,
    delta_left,
    delta_right,
    simple_tensor,
    tensor_star,
)


def mono(q, k, l=0, m=0, c=1):
    return Element.monomial(q, k, l, m, c)


def test_generator_images():
    q = mpq(-1, 2)
    a, A, g, G = (Monomial(1, 0, 0), Monomial(-1, 0, 0), Monomial(0, 1, 0), Monomial(0, 0, 1))
    assert coproduct(mono(q, 1)) == TensorElement(q, {(a, a): 1, (G, g): -q})
    assert coproduct(mono(q, 0, 1)) == TensorElement(q, {(g, a): 1, (A, g): 1})
    assert coproduct(mono(q, 0, 0, 1)) == TensorElement(q, {(G, A): 1, (a, G): 1})
    assert coproduct(mono(q, -1)) == TensorElement(q, {(A, A): 1, (g, G): -q})


def test_unit_maps_to_unit():
    assert coproduct(Element.scalar(-1)) == TensorElement.unit(-1)


def test_gamma_gamma_star_expansion_at_minus_one():
    D = coproduct_monomial(-1, (0, 1, 1))
    # four products in the unexpanded form give five normal-form terms
    assert len(D) == 5
    assert D == closed_form_neg1(0, 1, 1)


def _counit(mn):
    # epsilon(alpha) = 1, epsilon(gamma) = 0
    return 1 if mn.l == 0 and mn.m == 0 else 0


@pytest.mark.parametrize("q", [-1, mpq(-1, 2)])
def test_counit_property(q):
    for mn in basis_monomials(2):
        x = mono(q, *mn)
        D = coproduct(x)
        assert apply_left_state(D, _counit) == x


def _eval_classical(x, a, c):
    total = 0j
    for (k, l, m), coeff in x.sorted_items():
        head = a**k if k >= 0 else np.conj(a) ** (-k)
        total += complex(coeff) * head * c**l * np.conj(c) ** m
    return total


def _su2(rng):
    v = rng.standard_normal(4)
    v /= np.linalg.norm(v)
    return complex(v[0], v[1]), complex(v[2], v[3])


def test_q_equal_one_is_the_group_law():
    """Oracle: at q = 1 the coproduct is dual to matrix multiplication in SU(2)."""
    nprng = np.random.default_rng(3)
    r = random.Random(3)
    for _ in range(20):
        x = random_element(r, 1, 3)
        D = coproduct(x)
        (a1, c1), (a2, c2) = _su2(nprng), _su2(nprng)
        u1 = np.array([[a1, -np.conj(c1)], [c1, np.conj(a1)]])
        u2 = np.array([[a2, -np.conj(c2)], [c2, np.conj(a2)]])
        prod = u1 @ u2
        lhs = _eval_classical(x, prod[0, 0], prod[1, 0])
        rhs = 0j
        for (m1, m2), coeff in D.items():
            rhs += complex(coeff) * _eval_classical(mono(1, *m1), a1, c1) * _eval_classical(mono(1, *m2), a2, c2)
        assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("q", [-1, mpq(-1, 2)])
def test_coassociativity(q):
    for mn in basis_monomials(3):
        D = coproduct_monomial(q, mn)
        assert delta_left(D) == delta_right(D), mn


def test_closed_form_matches():
    for k in range(4):
        for l in range(4):
            for m in range(4):
                assert closed_form_neg1(k, l, m) == coproduct_monomial(-1, (k, l, m))


def test_closed_form_rejects_negative_k():
    with pytest.raises(ValueError):
        closed_form_neg1(-1, 0, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([-1, "-1/2"]))
def test_homomorphism_and_star(seed, q):
    r = random.Random(seed)
    x, y = random_element(r, q, 3), random_element(r, q, 3)
    assert coproduct(x * y) == coproduct(x) * coproduct(y)
    assert coproduct(x.star()) == tensor_star(coproduct(x))


def test_tensor_json_roundtrip(rng):
    D = coproduct(random_element(rng, "-3/5", 2))
    assert TensorElement.from_dict(D.to_dict()) == D


def test_simple_tensor_bilinear():
    q = mpq(-1, 2)
    x, y, z = mono(q, 1), mono(q, 0, 1), mono(q, 0, 0, 2, 3)
    assert simple_tensor(x + y, z) == simple_tensor(x, z) + simple_tensor(y, z)


def test_arity_mismatch():
    with pytest.raises(ValueError):
        TensorElement(-1, {((0, 0, 0),): 1})
