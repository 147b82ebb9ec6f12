"""Coproduct on the algebraic tensor powers of SU_q(2)."""

from __future__ import annotations

import json
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq

from .algebra import ONE, Element, Monomial, monomial_product, word
from .scalars import GaussianRational, ParameterError, conj, format_rational, gaussian, qparam, real_imag

__all__ = [
    "TensorElement",
    "tensor_mul",
    "coproduct",
    "coproduct_monomial",
    "closed_form_neg1",
    "apply_right_state",
    "apply_left_state",
    "delta_left",
    "delta_right",
    "tensor_star",
    "simple_tensor",
]


class TensorElement:
    """Linear combination of tuples of monomials (default: pairs)."""

    __slots__ = ("q", "arity", "_terms")

    def __init__(self, q, terms: Mapping | Iterable = (), arity: int = 2):
        self.q = qparam(q)
        self.arity = arity
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for key, coeff in items:
            key = tuple(Monomial(*mono) for mono in key)
            if len(key) != arity:
                raise ValueError(f"expected {arity} tensor legs, got {len(key)}")
            c = coeff if isinstance(coeff, GaussianRational) else mpq(coeff)
            acc[key] = acc.get(key, 0) + c
        self._terms = {key: c for key, c in acc.items() if c}

    @classmethod
    def _from_clean(cls, q, terms, arity=2):
        obj = object.__new__(cls)
        obj.q = q
        obj.arity = arity
        obj._terms = terms
        return obj

    @classmethod
    def unit(cls, q, arity: int = 2) -> "TensorElement":
        q = qparam(q)
        return cls._from_clean(q, {(ONE,) * arity: mpq(1)}, arity)

    def items(self):
        return self._terms.items()

    @property
    def terms(self):
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other):
        if self.q != other.q:
            raise ParameterError(f"mismatched deformation parameters {self.q} and {other.q}")
        if self.arity != other.arity:
            raise ValueError("tensor arity mismatch")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            acc[key] = acc.get(key, 0) + c
        return TensorElement._from_clean(self.q, {k: c for k, c in acc.items() if c}, self.arity)

    def __neg__(self):
        return TensorElement._from_clean(self.q, {k: -c for k, c in self._terms.items()}, self.arity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        return TensorElement._from_clean(
            self.q, {k: v * c for k, v in self._terms.items() if v * c}, self.arity
        )

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_mul(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.q == other.q and self.arity == other.arity and self._terms == other._terms

    def __hash__(self):
        return hash((self.q, self.arity, frozenset(self._terms.items())))

    def __repr__(self):
        return f"TensorElement(q={format_rational(self.q)}, {len(self._terms)} terms)"

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(
            f"({c})*" + "(x)".join(str(m) for m in key) for key, c in sorted(self._terms.items())
        )

    def to_dict(self) -> dict:
        terms = []
        for key, c in sorted(self._terms.items()):
            re, im = real_imag(c)
            terms.append(
                {
                    "legs": [{"k": m.k, "l": m.l, "m": m.m} for m in key],
                    "re": format_rational(re),
                    "im": format_rational(im),
                }
            )
        return {"q": format_rational(self.q), "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "TensorElement":
        raw = data.get("terms", [])
        arity = len(raw[0]["legs"]) if raw else 2
        terms = [
            (
                tuple((leg["k"], leg["l"], leg["m"]) for leg in t["legs"]),
                gaussian(mpq(str(t.get("re", "0"))), mpq(str(t.get("im", "0")))),
            )
            for t in raw
        ]
        return cls(str(data["q"]), terms, arity=arity)


def simple_tensor(*legs: Element) -> TensorElement:
    """x1 (x) x2 (x) ... for elements at a common q."""
    q = legs[0].q
    acc = {(): mpq(1)}
    for leg in legs:
        if leg.q != q:
            raise ParameterError("mismatched deformation parameters")
        acc = {key + (mono,): c * d for key, c in acc.items() for mono, d in leg.items()}
    return TensorElement._from_clean(q, {k: c for k, c in acc.items() if c}, len(legs))


def tensor_mul(X: TensorElement, Y: TensorElement) -> TensorElement:
    """Componentwise product (a (x) b)(c (x) d) = ac (x) bd, extended bilinearly."""
    X._check(Y)
    q = X.q
    acc: dict = {}
    get = acc.get
    if X.arity == 2:
        for (a, b), c1 in X._terms.items():
            for (c, d), c2 in Y._terms.items():
                c12 = c1 * c2
                left = monomial_product(q, a, c)
                right = monomial_product(q, b, d)
                for m1, r1 in left:
                    cr = c12 * r1
                    for m2, r2 in right:
                        key = (m1, m2)
                        acc[key] = get(key, 0) + cr * r2
    else:
        for kx, c1 in X._terms.items():
            for ky, c2 in Y._terms.items():
                partial = {(): c1 * c2}
                for a, b in zip(kx, ky):
                    prod = monomial_product(q, a, b)
                    partial = {key + (m,): c * r for key, c in partial.items() for m, r in prod}
                for key, c in partial.items():
                    acc[key] = get(key, 0) + c
    return TensorElement._from_clean(q, {k: c for k, c in acc.items() if c}, X.arity)


@lru_cache(maxsize=None)
def _generator_images(q: mpq) -> dict:
    # Delta(alpha) = alpha(x)alpha - q gamma*(x)gamma ; Delta(gamma) = gamma(x)alpha + alpha*(x)gamma
    a, A = Monomial(1, 0, 0), Monomial(-1, 0, 0)
    g, G = Monomial(0, 1, 0), Monomial(0, 0, 1)
    mk = lambda d: TensorElement._from_clean(q, d)  # noqa: E731
    return {
        "a": mk({(a, a): mpq(1), (G, g): -q}),
        "A": mk({(A, A): mpq(1), (g, G): -q}),
        "g": mk({(g, a): mpq(1), (A, g): mpq(1)}),
        "G": mk({(G, A): mpq(1), (a, G): mpq(1)}),
    }


@lru_cache(maxsize=None)
def _coproduct_monomial_cached(q: mpq, mono: Monomial) -> TensorElement:
    k, l, m = mono
    if mono == ONE:
        return TensorElement.unit(q)
    gens = _generator_images(q)
    # peel the rightmost letter; eta^{k,l,m} = eta^{k,l,m-1} gamma* etc. exactly
    if m > 0:
        return tensor_mul(_coproduct_monomial_cached(q, Monomial(k, l, m - 1)), gens["G"])
    if l > 0:
        return tensor_mul(_coproduct_monomial_cached(q, Monomial(k, l - 1, 0)), gens["g"])
    if k > 0:
        return tensor_mul(_coproduct_monomial_cached(q, Monomial(k - 1, 0, 0)), gens["a"])
    return tensor_mul(_coproduct_monomial_cached(q, Monomial(k + 1, 0, 0)), gens["A"])


def coproduct_monomial(q, mono) -> TensorElement:
    return _coproduct_monomial_cached(qparam(q), Monomial(*mono))


def coproduct(x: Element) -> TensorElement:
    """Delta_q(x) as a unital *-homomorphism into the algebraic tensor square."""
    acc: dict = {}
    get = acc.get
    for mono, c in x.items():
        for key, d in _coproduct_monomial_cached(x.q, mono).items():
            acc[key] = get(key, 0) + c * d
    return TensorElement._from_clean(x.q, {k: c for k, c in acc.items() if c})


def _expand_leg(X: TensorElement, position: int) -> TensorElement:
    acc: dict = {}
    get = acc.get
    q = X.q
    for key, c in X._terms.items():
        head, mono, tail = key[:position], key[position], key[position + 1:]
        for (a, b), d in _coproduct_monomial_cached(q, mono).items():
            new = head + (a, b) + tail
            acc[new] = get(new, 0) + c * d
    return TensorElement._from_clean(q, {k: c for k, c in acc.items() if c}, X.arity + 1)


def delta_left(X: TensorElement) -> TensorElement:
    """(Delta (x) id) applied to a tensor of arity 2."""
    return _expand_leg(X, 0)


def delta_right(X: TensorElement) -> TensorElement:
    """(id (x) Delta) applied to a tensor of arity 2."""
    return _expand_leg(X, X.arity - 1)


def tensor_star(X: TensorElement) -> TensorElement:
    """star (x) star, legwise."""
    from .algebra import _star_monomial

    acc = {}
    for key, c in X._terms.items():
        new_key = []
        r = mpq(1)
        for mono in key:
            m2, s = _star_monomial(X.q, mono)
            new_key.append(m2)
            r *= s
        acc[tuple(new_key)] = conj(c) * r
    return TensorElement._from_clean(X.q, acc, X.arity)


def _leg(q, letters_counts: list[tuple[str, int]]) -> Element:
    return word(q, "".join(ch * n for ch, n in letters_counts))


def closed_form_neg1(k: int, l: int, m: int) -> TensorElement:
    """Triple-binomial expansion of Delta_{-1}(eta^{klm}) for k >= 0.

    Valid only at q = -1, where alpha(x)alpha commutes with gamma*(x)gamma and
    gamma(x)alpha commutes with alpha*(x)gamma.
    """
    if k < 0:
        raise ValueError("closed form requires k >= 0; use star symmetry for k < 0")
    if l < 0 or m < 0:
        raise ValueError("gamma exponents must be nonnegative")
    q = mpq(-1)
    total = TensorElement._from_clean(q, {}, 2)
    for i in range(k + 1):
        for j in range(l + 1):
            for p in range(m + 1):
                left = _leg(q, [("a", i), ("G", k - i), ("g", j), ("A", l - j), ("G", p), ("a", m - p)])
                right = _leg(q, [("a", i), ("g", k - i), ("a", j), ("g", l - j), ("A", p), ("G", m - p)])
                coeff = comb(k, i) * comb(l, j) * comb(m, p)
                total = total + simple_tensor(left, right).scale(mpq(coeff))
    return total


def apply_right_state(X: TensorElement, h: Callable[[Monomial], object]) -> Element:
    """(id (x) h)(X)."""
    acc: dict = {}
    for (a, b), c in X._terms.items():
        v = h(b)
        if v:
            acc[a] = acc.get(a, 0) + c * v
    return Element._from_clean(X.q, {mn: c for mn, c in acc.items() if c})


def apply_left_state(X: TensorElement, h: Callable[[Monomial], object]) -> Element:
    """(h (x) id)(X)."""
    acc: dict = {}
    for (a, b), c in X._terms.items():
        v = h(a)
        if v:
            acc[b] = acc.get(b, 0) + c * v
    return Element._from_clean(X.q, {mn: c for mn, c in acc.items() if c})
