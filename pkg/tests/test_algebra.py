import random

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from suq2.algebra import (
    AlgMatrix,
    Element,
    Monomial,
    basis_monomials,
    generators,
    make_uq,
    mat_star,
    random_element,
    star,
    word,
)
from suq2.bundle import generator_matrices
from suq2.scalars import ParameterError, gaussian

QS = [-1, mpq(-1, 2), mpq(-3, 5), 1]


def mono(q, k, l=0, m=0, c=1):
    return Element.monomial(q, k, l, m, c)


@pytest.mark.parametrize("q", QS)
def test_defining_relations(q):
    g = generators(q)
    a, A, c, C = g["a"], g["A"], g["g"], g["G"]
    one = Element.scalar(q)
    q = a.q
    assert A * a + C * c == one
    assert a * A + (c * C).scale(q * q) == one
    assert c * C == C * c
    assert a * c == (c * a).scale(q)
    assert a * C == (C * a).scale(q)


def test_gamma_alpha_normal_form():
    q = mpq(-1, 2)
    assert word(q, "ga") == mono(q, 1, 1, 0, 1 / q)
    assert word(q, "Ga") == mono(q, 1, 0, 1, 1 / q)
    assert word(q, "gA") == mono(q, -1, 1, 0, q)


def test_alpha_star_alpha_expands():
    q = mpq(-1, 2)
    # alpha* alpha = 1 - gamma* gamma = 1 - eta^{011}
    assert word(q, "Aa") == Element.scalar(q) - mono(q, 0, 1, 1)
    # alpha alpha* = 1 - q^2 eta^{011}
    assert word(q, "aA") == Element.scalar(q) - mono(q, 0, 1, 1, q * q)


@pytest.mark.parametrize("q", QS)
def test_fundamental_unitary(q):
    U = make_uq(q)
    assert U @ mat_star(U) == AlgMatrix.identity(q)
    assert mat_star(U) @ U == AlgMatrix.identity(q)


def test_star_of_monomial_formula():
    q = mpq(-3, 5)
    for k, l, m in basis_monomials(2):
        x = mono(q, k, l, m)
        assert star(x) == mono(q, -k, m, l, q ** (k * (l + m)))


@pytest.mark.parametrize("q", [-1, mpq(-1, 2)])
def test_centrality_at_minus_one(q):
    a2 = word(q, "aa")
    g2 = word(q, "gg")
    central = all(
        a2 * mono(q, *mn) == mono(q, *mn) * a2 and g2 * mono(q, *mn) == mono(q, *mn) * g2
        for mn in basis_monomials(3)
    )
    assert central == (q == -1)


def test_unit():
    q = mpq(-1, 2)
    one = mono(q, 0)
    for mn in basis_monomials(2):
        x = mono(q, *mn, gaussian(1, 2))
        assert one * x == x == x * one


def test_mismatched_q_rejected():
    with pytest.raises(ParameterError):
        mono(-1, 1) * mono(mpq(-1, 2), 1)


def test_monomial_validation():
    with pytest.raises(ValueError):
        Element(-1, [((0, -1, 0), 1)])


def test_json_roundtrip(rng):
    for _ in range(20):
        x = random_element(rng, mpq(-3, 5), 3)
        assert Element.from_json(x.to_json()) == x


def test_zero_terms_dropped():
    q = -1
    x = mono(q, 1) - mono(q, 1)
    assert not x and x.to_dict()["terms"] == []


def _numeric(x, A, G):
    As, Gs = A.conj().T, G.conj().T
    mp = np.linalg.matrix_power
    out = np.zeros_like(A)
    for (k, l, m), c in x.sorted_items():
        head = mp(A, k) if k >= 0 else mp(As, -k)
        out += complex(c) * head @ mp(G, l) @ mp(Gs, m)
    return out


@pytest.mark.parametrize("q", [mpq(-1, 2), mpq(-3, 5)])
def test_normal_form_matches_operator_products(q):
    """Oracle: the l^2 representation turns words into products of matrices."""
    size = 30
    A, G = generator_matrices(q, size, np.exp(0.7j))
    mats = {"a": A, "A": A.conj().T, "g": G, "G": G.conj().T}
    r = random.Random(1)
    for _ in range(40):
        letters = "".join(r.choice("aAgG") for _ in range(r.randint(1, 7)))
        direct = np.eye(size, dtype=complex)
        for ch in letters:
            direct = direct @ mats[ch]
        inner = size - len(letters)
        got = _numeric(word(q, letters), A, G)
        assert np.allclose(got[:inner, :inner], direct[:inner, :inner], atol=1e-12), letters


def test_normal_form_matches_two_dim_rep_at_minus_one():
    a, c = 0.6 * np.exp(0.3j), 0.8 * np.exp(-1.1j)
    A = np.diag([a, -a])
    G = np.array([[0, c], [c, 0]])
    mats = {"a": A, "A": A.conj().T, "g": G, "G": G.conj().T}
    r = random.Random(2)
    for _ in range(40):
        letters = "".join(r.choice("aAgG") for _ in range(r.randint(1, 8)))
        direct = np.eye(2, dtype=complex)
        for ch in letters:
            direct = direct @ mats[ch]
        assert np.allclose(_numeric(word(-1, letters), A, G), direct, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([-1, "-1/2", "-3/5"]))
def test_associativity_and_involution(seed, q):
    r = random.Random(seed)
    x, y, z = (random_element(r, q, 3, box=True) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x.star().star() == x
    assert (x * y).star() == y.star() * x.star()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_distributivity(seed):
    r = random.Random(seed)
    x, y, z = (random_element(r, "-2/7", 2) for _ in range(3))
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


def test_power():
    q = mpq(-1, 2)
    x = mono(q, 1, 1, 0) + mono(q, 0, 0, 1)
    assert x**3 == x * x * x
    assert x**0 == Element.scalar(q)


def test_random_element_degree_bounds(rng):
    for _ in range(20):
        assert random_element(rng, -1, 3).degree <= 3
        x = random_element(rng, -1, 2, box=True)
        assert all(abs(m.k) <= 2 and m.l <= 2 and m.m <= 2 for m in x.terms)


def test_monomial_degree():
    assert Monomial(-2, 1, 3).degree == 6
