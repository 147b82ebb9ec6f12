"""Haar states of SU_q(2) and exact invariance checks."""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Callable

from gmpy2 import mpq

from .algebra import Element, Monomial
from .hopf import apply_left_state, apply_right_state, coproduct
from .scalars import ParameterError, gaussian, qparam, real_imag

__all__ = [
    "HaarState",
    "haar_monomial",
    "haar_element",
    "invariance_residuals",
    "recursion_check_neg1",
    "recursion_identity_neg1",
]


@lru_cache(maxsize=None)
def _haar_rule(q: mpq, k: int, l: int, m: int, exponent_shift: int) -> mpq:
    if k != 0 or l != m:
        return mpq(0)
    if abs(q) == 1:
        return mpq(1, m + 1)
    return (1 - q * q) / (1 - q ** (2 * m + exponent_shift))


def haar_monomial(k: int, l: int, m: int, q) -> mpq:
    """Value of the Haar state on eta^{klm}.

    ``(1 - q^2) / (1 - q^(2m+2))`` on the diagonal monomials ``k = 0, l = m``
    for ``|q| < 1``, ``1/(m+1)`` there for ``q = +-1``, and zero elsewhere.
    """
    return _haar_rule(qparam(q), k, l, m, 2)


class HaarState:
    """A linear functional on the polynomial algebra given by its monomial values.

    By default this is the Haar state.  ``rule`` replaces the monomial values,
    which is how the tests build perturbed functionals to show that the
    invariance check can tell them apart.
    """

    def __init__(self, q, rule: Callable[[Monomial], object] | None = None):
        self.q = qparam(q)
        self.mode = "boundary" if abs(self.q) == 1 else "generic"
        self._rule = rule

    @classmethod
    def with_exponent(cls, q, shift: int) -> "HaarState":
        """Closed form with denominator ``1 - q^(2m+shift)`` instead of ``2m+2``."""
        q = qparam(q)
        return cls(q, lambda mono: _haar_rule(q, mono[0], mono[1], mono[2], shift))

    @classmethod
    def perturbed(cls, q, mono, eps) -> "HaarState":
        base = cls(q)
        target = Monomial(*mono)
        eps = mpq(eps)
        return cls(q, lambda m: base(m) + eps if m == target else base(m))

    def __call__(self, mono) -> object:
        mono = Monomial(*mono)
        if self._rule is not None:
            return self._rule(mono)
        return _haar_rule(self.q, mono.k, mono.l, mono.m, 2)

    def element(self, x: Element):
        if x.q != self.q:
            raise ParameterError("state and element have different deformation parameters")
        total = mpq(0)
        for mono, c in x.items():
            v = self(mono)
            if v:
                total = total + c * v
        return gaussian(*real_imag(total))


def haar_element(x: Element, h: HaarState | None = None):
    """Linear extension of the Haar state to an element (exact)."""
    h = HaarState(x.q) if h is None else h
    return h.element(x)


def invariance_residuals(x: Element, h: HaarState | None = None) -> tuple[Element, Element]:
    """``((id (x) h) Delta(x) - h(x) 1, (h (x) id) Delta(x) - h(x) 1)``."""
    h = HaarState(x.q) if h is None else h
    D = coproduct(x)
    hx = Element.scalar(x.q, h.element(x))
    return apply_right_state(D, h) - hx, apply_left_state(D, h) - hx


def recursion_check_neg1(m: int, h: HaarState | None = None) -> mpq:
    """``-m h(eta^{0mm}) + m^2 h(eta^{0,m-1,m-1}) - m^2 h(eta^{0mm})`` at q = -1."""
    if m < 1:
        raise ValueError("recursion index must be a positive integer")
    h = HaarState(-1) if h is None else h
    if h.q != -1:
        raise ParameterError("the recursion holds at q = -1 only")
    top = h((0, m, m))
    return -m * top + m * m * h((0, m - 1, m - 1)) - m * m * top


def recursion_identity_neg1(m: int, h: HaarState | None = None) -> dict[int, mpq]:
    """Right-hand side of the simplified right-invariance identity for eta^{0mm}.

    Returns ``{n: coefficient of eta^{0nn}}`` of the triple binomial sum
    ``sum_{p,i,j} C(m,p)^2 C(m-p,i) C(p,j) (-1)^{i+j} h(eta^{0,p+i,p+i}) eta^{0,m-p+j,m-p+j}``.
    For the true Haar state this must equal ``h(eta^{0mm}) * 1``.
    """
    h = HaarState(-1) if h is None else h
    out: dict[int, mpq] = {}
    for p in range(m + 1):
        for i in range(m - p + 1):
            for j in range(p + 1):
                c = comb(m, p) ** 2 * comb(m - p, i) * comb(p, j) * (-1) ** (i + j)
                n = m - p + j
                out[n] = out.get(n, mpq(0)) + c * h((0, p + i, p + i))
    return {n: v for n, v in out.items() if v}
