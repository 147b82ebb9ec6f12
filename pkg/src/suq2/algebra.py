"""Polynomial *-algebra of SU_q(2) over the monomial basis eta^{klm}.

A monomial ``(k, l, m)`` stands for ``alpha^k gamma^l gamma*^m`` when
``k >= 0`` and for ``alpha*^{-k} gamma^l gamma*^m`` when ``k < 0``.  Every
element is stored in this normal form, so equality of elements is equality
of their term maps.

Products are normal-ordered in two moves.  First the gamma letters of the
left factor are pushed through the alpha letters of the right factor::

    gamma alpha = q^-1 alpha gamma      gamma* alpha = q^-1 alpha gamma*
    gamma alpha* = q alpha* gamma       gamma* alpha* = q alpha* gamma*

Then mixed alpha powers are cancelled with ``alpha alpha* = 1 - q^2 N`` and
``alpha* alpha = 1 - N`` where ``N = gamma gamma*``.
"""

from __future__ import annotations

import json
import random
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

from gmpy2 import mpq

from .scalars import (
    GaussianRational,
    ParameterError,
    as_rational,
    conj,
    format_rational,
    gaussian,
    qparam,
    real_imag,
)

__all__ = [
    "Monomial",
    "Element",
    "AlgMatrix",
    "ONE",
    "normal_mul",
    "star",
    "mat_mul",
    "mat_star",
    "make_uq",
    "generators",
    "word",
    "monomial_product",
    "random_element",
    "basis_monomials",
]


class Monomial(NamedTuple):
    k: int
    l: int
    m: int

    def __str__(self):
        return f"eta^({self.k},{self.l},{self.m})"

    @property
    def degree(self) -> int:
        return abs(self.k) + self.l + self.m


ONE = Monomial(0, 0, 0)


def _check_monomial(mono) -> Monomial:
    mono = Monomial(*mono)
    if mono.l < 0 or mono.m < 0:
        raise ValueError(f"gamma exponents must be nonnegative: {mono}")
    return mono


@lru_cache(maxsize=None)
def _alpha_astar(q: mpq, a: int, b: int) -> tuple[int, tuple]:
    """alpha^a alpha*^b = alpha-power * poly(N), poly as coefficient tuple."""
    n = min(a, b)
    poly = [mpq(1)]
    for j in range(n):
        poly = _poly_times_linear(poly, -(q ** (2 * (b - j))))
    return a - b, tuple(poly)


@lru_cache(maxsize=None)
def _astar_alpha(q: mpq, b: int, a: int) -> tuple[int, tuple]:
    """alpha*^b alpha^a = alpha-power * poly(N)."""
    n = min(a, b)
    poly = [mpq(1)]
    for j in range(n):
        poly = _poly_times_linear(poly, -(q ** (-2 * (a - 1 - j))))
    return a - b, tuple(poly)


def _poly_times_linear(poly, c):
    # poly * (1 + c N)
    out = list(poly) + [mpq(0)]
    for i, p in enumerate(poly):
        out[i + 1] += c * p
    return out


@lru_cache(maxsize=None)
def monomial_product(q: mpq, left: Monomial, right: Monomial) -> tuple[tuple[Monomial, mpq], ...]:
    """Normal form of ``eta^left * eta^right`` as ``((monomial, coeff), ...)``.

    All structure constants are real rationals because q is real.
    """
    k1, l1, m1 = left
    k2, l2, m2 = right
    shift = l1 + m1
    if shift and k2:
        scale = q ** (-k2 * shift) if k2 > 0 else q ** ((-k2) * shift)
    else:
        scale = mpq(1)
    if k1 > 0 and k2 < 0:
        k, poly = _alpha_astar(q, k1, -k2)
    elif k1 < 0 and k2 > 0:
        k, poly = _astar_alpha(q, -k1, k2)
    else:
        k, poly = k1 + k2, (mpq(1),)
    l, m = l1 + l2, m1 + m2
    out = []
    for j, p in enumerate(poly):
        if p:
            out.append((Monomial(k, l + j, m + j), scale * p))
    return tuple(out)


class Element:
    """A finite linear combination of basis monomials at a fixed q."""

    __slots__ = ("q", "_terms")

    def __init__(self, q, terms: Mapping | Iterable = ()):
        self.q = qparam(q)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, object] = {}
        for mono, coeff in items:
            mono = _check_monomial(mono)
            c = coeff if isinstance(coeff, GaussianRational) else as_rational(coeff)
            acc[mono] = acc.get(mono, 0) + c
        self._terms = {mono: gaussian(*real_imag(c)) for mono, c in acc.items() if c}

    @classmethod
    def _from_clean(cls, q: mpq, terms: dict) -> "Element":
        obj = object.__new__(cls)
        obj.q = q
        obj._terms = terms
        return obj

    @classmethod
    def monomial(cls, q, k: int, l: int = 0, m: int = 0, coeff=1) -> "Element":
        return cls(q, {(k, l, m): coeff})

    @classmethod
    def scalar(cls, q, coeff=1) -> "Element":
        return cls(q, {ONE: coeff})

    @classmethod
    def zero(cls, q) -> "Element":
        return cls(q)

    @property
    def terms(self) -> Mapping[Monomial, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items())

    def coeff(self, mono) -> object:
        return self._terms.get(Monomial(*mono), mpq(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self) -> int:
        return max((mono.degree for mono in self._terms), default=0)

    def _check(self, other: "Element"):
        if self.q != other.q:
            raise ParameterError(f"mismatched deformation parameters {self.q} and {other.q}")

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(self.q, other)
        self._check(other)
        acc = dict(self._terms)
        for mono, c in other._terms.items():
            acc[mono] = acc.get(mono, 0) + c
        return Element._from_clean(self.q, {mn: c for mn, c in acc.items() if c})

    __radd__ = __add__

    def __neg__(self):
        return Element._from_clean(self.q, {mn: -c for mn, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        if not isinstance(c, GaussianRational):
            c = as_rational(c)
        if not c:
            return Element.zero(self.q)
        return Element._from_clean(self.q, {mn: v * c for mn, v in self._terms.items() if v * c})

    def __mul__(self, other):
        if isinstance(other, Element):
            return normal_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = Element.scalar(self.q)
        for _ in range(n):
            out = normal_mul(out, self)
        return out

    def star(self) -> "Element":
        return star(self)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.q == other.q and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.q, frozenset(self._terms.items())))

    def __repr__(self):
        return f"Element(q={format_rational(self.q)}, {self}))"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_items():
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    # serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        terms = []
        for (k, l, m), c in self.sorted_items():
            re, im = real_imag(c)
            terms.append({"k": k, "l": l, "m": m, "re": format_rational(re), "im": format_rational(im)})
        return {"q": format_rational(self.q), "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict) -> "Element":
        try:
            q = data["q"]
            raw = data.get("terms", [])
            terms = [
                ((int(t["k"]), int(t["l"]), int(t["m"])), gaussian(as_rational(str(t.get("re", "0"))), as_rational(str(t.get("im", "0")))))
                for t in raw
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed element record: {exc}") from exc
        return cls(str(q), terms)

    @classmethod
    def from_json(cls, text: str) -> "Element":
        return cls.from_dict(json.loads(text))


def normal_mul(x: Element, y: Element) -> Element:
    """Product of two elements, returned in normal form."""
    x._check(y)
    q = x.q
    acc: dict[Monomial, object] = {}
    get = acc.get
    for m1, c1 in x._terms.items():
        for m2, c2 in y._terms.items():
            c12 = c1 * c2
            for mono, r in monomial_product(q, m1, m2):
                acc[mono] = get(mono, 0) + c12 * r
    return Element._from_clean(q, {mn: c for mn, c in acc.items() if c})


def _star_monomial(q: mpq, mono: Monomial) -> tuple[Monomial, mpq]:
    # (alpha^k g^l g*^m)^* = g^m g*^l alpha*^k = q^{k(l+m)} alpha*^k g^m g*^l
    k, l, m = mono
    return Monomial(-k, m, l), q ** (k * (l + m))


def star(x: Element) -> Element:
    """The involution: antilinear, antimultiplicative, normal-form output."""
    out = {}
    for mono, c in x._terms.items():
        mono2, r = _star_monomial(x.q, mono)
        out[mono2] = conj(c) * r
    return Element._from_clean(x.q, out)


def generators(q) -> dict[str, Element]:
    """The four letters ``a`` (alpha), ``A`` (alpha*), ``g`` (gamma), ``G`` (gamma*)."""
    q = qparam(q)
    return {
        "a": Element.monomial(q, 1),
        "A": Element.monomial(q, -1),
        "g": Element.monomial(q, 0, 1, 0),
        "G": Element.monomial(q, 0, 0, 1),
    }


def word(q, letters: str) -> Element:
    """Normal form of a word in the letters ``a A g G`` (read left to right)."""
    gens = generators(q)
    out = Element.scalar(q)
    for ch in letters:
        out = normal_mul(out, gens[ch])
    return out


def basis_monomials(kmax: int, lmax: int | None = None, mmax: int | None = None) -> list[Monomial]:
    """All monomials with |k| <= kmax, l <= lmax, m <= mmax, sorted."""
    lmax = kmax if lmax is None else lmax
    mmax = kmax if mmax is None else mmax
    return [
        Monomial(k, l, m)
        for k in range(-kmax, kmax + 1)
        for l in range(lmax + 1)
        for m in range(mmax + 1)
    ]


def random_element(rng: random.Random, q, degree: int = 3, n_terms: int = 3, complex_coeffs: bool = True,
                   box: bool = False) -> Element:
    """Random element with small Gaussian-rational coefficients.

    Monomials have total degree |k|+l+m <= degree, or with ``box=True`` each
    of |k|, l, m is at most ``degree``.
    """
    q = qparam(q)
    monos = [mono for mono in basis_monomials(degree) if box or mono.degree <= degree]
    terms = []
    for _ in range(n_terms):
        mono = rng.choice(monos)
        re = mpq(rng.randint(-5, 5), rng.randint(1, 4))
        im = mpq(rng.randint(-5, 5), rng.randint(1, 4)) if complex_coeffs else mpq(0)
        terms.append((mono, gaussian(re, im)))
    return Element(q, terms)


class AlgMatrix:
    """Square matrix with entries in the algebra, all at one q."""

    __slots__ = ("q", "entries")

    def __init__(self, entries):
        rows = [list(row) for row in entries]
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("AlgMatrix must be square and nonempty")
        q = rows[0][0].q
        for row in rows:
            for e in row:
                if e.q != q:
                    raise ParameterError("all entries must share one deformation parameter")
        self.q = q
        self.entries = tuple(tuple(row) for row in rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, q, n: int = 2) -> "AlgMatrix":
        return cls([[Element.scalar(q, 1 if i == j else 0) for j in range(n)] for i in range(n)])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"AlgMatrix([{body}])"


def mat_mul(A: AlgMatrix, B: AlgMatrix) -> AlgMatrix:
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    if A.q != B.q:
        raise ParameterError("mismatched deformation parameters")
    n = A.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Element.zero(A.q)
            for t in range(n):
                acc = acc + normal_mul(A.entries[i][t], B.entries[t][j])
            row.append(acc)
        out.append(row)
    return AlgMatrix(out)


def mat_star(A: AlgMatrix) -> AlgMatrix:
    n = A.n
    return AlgMatrix([[star(A.entries[j][i]) for j in range(n)] for i in range(n)])


def make_uq(q) -> AlgMatrix:
    """The fundamental unitary [[alpha, -q gamma*], [gamma, alpha*]]."""
    q = qparam(q)
    return AlgMatrix(
        [
            [Element.monomial(q, 1), Element.monomial(q, 0, 0, 1, coeff=-q)],
            [Element.monomial(q, 0, 1, 0), Element.monomial(q, -1)],
        ]
    )
