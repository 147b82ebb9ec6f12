"""Exact scalars: the deformation parameter and Gaussian-rational coefficients.

Coefficients are kept as ``gmpy2.mpq`` whenever they are real and promoted
to :class:`GaussianRational` only when an imaginary part appears.  All
arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "ParameterError",
    "as_rational",
    "gaussian",
    "conj",
    "is_zero",
    "qparam",
    "format_rational",
    "parse_gaussian",
    "real_imag",
]


class ParameterError(ValueError):
    """Raised for invalid or mismatched deformation parameters."""


def as_rational(value) -> mpq:
    """Convert ints, Fractions, mpq and ``"p/r"`` strings to ``mpq``.

    Floats are rejected: they would silently import rounding error.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing to convert float {value!r} to an exact rational")
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        return mpq(Fraction(text))
    if isinstance(value, (int, Rational)) or type(value).__name__ in ("mpq", "mpz"):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def qparam(value) -> mpq:
    """Validate a deformation parameter: a nonzero rational in [-1, 1]."""
    if isinstance(value, GaussianRational):
        raise ParameterError("the deformation parameter must be real")
    q = as_rational(value)
    if q == 0:
        raise ParameterError("q = 0 is excluded")
    if abs(q) > 1:
        raise ParameterError(f"|q| must be at most 1, got {q}")
    return q


def format_rational(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class GaussianRational:
    """An exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_rational(re)
        self.im = as_rational(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gaussian(self.re + other.re, self.im + other.im)
        try:
            other = as_rational(other)
        except TypeError:
            return NotImplemented
        return gaussian(self.re + other, self.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return gaussian(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        try:
            other = as_rational(other)
        except TypeError:
            return NotImplemented
        return gaussian(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            den = other.re * other.re + other.im * other.im
            return self * gaussian(other.re / den, -other.im / den)
        other = as_rational(other)
        return gaussian(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        return GaussianRational._raw(as_rational(other), mpq(0)) / self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        try:
            other = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.im == 0 and self.re == other

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        if self.re == 0:
            return f"{format_rational(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}i"


def gaussian(re, im=0):
    """Canonical coefficient: ``mpq`` if purely real, else GaussianRational."""
    if im == 0:
        return re if type(re) is mpq else as_rational(re)
    return GaussianRational._raw(
        re if type(re) is mpq else as_rational(re),
        im if type(im) is mpq else as_rational(im),
    )


def conj(c):
    if isinstance(c, GaussianRational):
        return GaussianRational._raw(c.re, -c.im)
    return c


def is_zero(c) -> bool:
    return not c


def real_imag(c) -> tuple[mpq, mpq]:
    if isinstance(c, GaussianRational):
        return c.re, c.im
    return mpq(c), mpq(0)


def parse_gaussian(re="0", im="0"):
    return gaussian(as_rational(re), as_rational(im))
