"""Exact algebra, Haar states and K-theory witnesses for C(SU_q(2))."""

from .algebra import AlgMatrix, Element, Monomial, generators, make_uq, random_element, word
from .haar import HaarState, haar_element, haar_monomial, invariance_residuals
from .hopf import TensorElement, coproduct
from .scalars import GaussianRational, ParameterError

__all__ = [
    "AlgMatrix",
    "Element",
    "GaussianRational",
    "HaarState",
    "Monomial",
    "ParameterError",
    "TensorElement",
    "coproduct",
    "generators",
    "haar_element",
    "haar_monomial",
    "invariance_residuals",
    "make_uq",
    "random_element",
    "word",
]

__version__ = "0.1.0"
