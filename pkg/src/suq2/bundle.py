"""Fiberwise evidence for the field of C(SU_q(2)) over q in [-1, 0).

Exact Haar profiles along rational q-grids, and norm lower bounds from
compressions of the irreducible l^2 representation for |q| < 1:

    pi(alpha) e_n = sqrt(1 - q^(2n)) e_(n-1),   pi(gamma) e_n = lambda q^n e_n.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .algebra import Element, Monomial
from .haar import HaarState, haar_monomial
from .scalars import ParameterError, as_rational, format_rational, qparam, real_imag

__all__ = [
    "QGrid",
    "FiberReport",
    "haar_profile",
    "smoothness_budget",
    "generator_matrices",
    "gns_truncation",
    "relation_residuals",
    "norm_lower_bound",
    "bundle_scan",
    "reports_to_csv",
]


class QGrid:
    """Strictly increasing exact rationals in [-1, 0)."""

    def __init__(self, points: Iterable):
        pts = [as_rational(p) for p in points]
        for p in pts:
            if not (-1 <= p < 0):
                raise ParameterError(f"grid point {format_rational(p)} is outside [-1, 0)")
        for a, b in zip(pts, pts[1:]):
            if not a < b:
                raise ValueError("grid points must be strictly increasing")
        self.points = pts

    @classmethod
    def parse(cls, text: str) -> "QGrid":
        """Comma separated rationals, sorted on input: ``"-1,-99/100,-1/2"``."""
        pts = sorted({as_rational(s) for s in text.split(",") if s.strip()})
        return cls(pts)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass
class FiberReport:
    q: mpq
    haar_values: dict = field(default_factory=dict)
    norm_bounds: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.flags


def haar_profile(k: int, l: int, m: int, grid: Iterable, h_factory=None) -> list:
    """Exact h_q(eta^{klm}) at every grid point."""
    if h_factory is None:
        return [haar_monomial(k, l, m, q) for q in grid]
    return [h_factory(q)((k, l, m)) for q in grid]


def smoothness_budget(mono) -> int:
    """Bound on |d h_q(eta^{klm}) / dq| over [-1, 0).

    h_q(eta^{0mm}) = 1 / (1 + q^2 + ... + q^(2m)); the numerator of its
    derivative is at most 2 + 4 + ... + 2m = m(m+1) in absolute value and the
    denominator is at least 1.
    """
    k, l, m = mono
    return m * (m + 1) if k == 0 and l == m else 0


def generator_matrices(q, size: int, phase: complex = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of pi(alpha), pi(gamma) on span(e_0, ..., e_(size-1))."""
    q = qparam(q)
    if abs(q) == 1:
        raise ParameterError("the l^2 representation needs |q| < 1")
    qf = float(q)
    n = np.arange(size)
    A = np.zeros((size, size), dtype=complex)
    A[n[:-1], n[1:]] = np.sqrt(1 - qf ** (2 * n[1:]))
    G = np.diag(phase * qf**n).astype(complex)
    return A, G


def _eval(x: Element, A: np.ndarray, G: np.ndarray) -> np.ndarray:
    As, Gs = A.conj().T, G.conj().T
    size = A.shape[0]
    out = np.zeros((size, size), dtype=complex)
    mp = np.linalg.matrix_power
    for (k, l, m), c in x.sorted_items():
        re, im = real_imag(c)
        coeff = complex(float(re), float(im))
        head = mp(A, k) if k >= 0 else mp(As, -k)
        out += coeff * head @ mp(G, l) @ mp(Gs, m)
    return out


def gns_truncation(x: Element, N: int, phase: complex = 1.0) -> np.ndarray:
    """P_N pi(x) P_N as an N x N matrix.

    Products are formed at size N + deg(x), which is large enough for the
    top-left N x N block to coincide with the compression of the infinite
    operator, so the result does not depend on truncation artefacts.
    """
    if N < 2:
        raise ValueError("truncation size must be at least 2")
    if abs(abs(complex(phase)) - 1) > 1e-12:
        raise ValueError("phase must have modulus one")
    A, G = generator_matrices(x.q, N + max(x.degree, 1), phase)
    return _eval(x, A, G)[:N, :N]


def relation_residuals(q, N: int, phase: complex = 1.0) -> dict[str, float]:
    """Largest ||R e_n|| over interior vectors n <= N-3 for each defining relation R.

    The relations are evaluated with the N x N generator matrices themselves,
    so vectors near the truncation edge would see artefacts; the interior ones
    must not.
    """
    A, G = generator_matrices(q, N, phase)
    qf = float(qparam(q))
    As, Gs = A.conj().T, G.conj().T
    eye = np.eye(N)
    rels = {
        "alpha* alpha + gamma* gamma = 1": As @ A + Gs @ G - eye,
        "alpha alpha* + q^2 gamma gamma* = 1": A @ As + qf**2 * G @ Gs - eye,
        "gamma gamma* = gamma* gamma": G @ Gs - Gs @ G,
        "alpha gamma = q gamma alpha": A @ G - qf * G @ A,
        "alpha gamma* = q gamma* alpha": A @ Gs - qf * Gs @ A,
    }
    interior = slice(0, N - 2)
    return {name: float(np.linalg.norm(R[:, interior], axis=0).max()) for name, R in rels.items()}


def _character_value(x: Element, z: complex) -> complex:
    # alpha -> z, gamma -> 0: only l = m = 0 monomials survive
    total = 0j
    for (k, l, m), c in x.sorted_items():
        if l == 0 and m == 0:
            re, im = real_imag(c)
            total += complex(float(re), float(im)) * (z**k if k >= 0 else np.conj(z) ** (-k))
    return total


def norm_lower_bound(x: Element, N: int, phases: int = 16, characters: bool = True) -> float:
    """Lower bound for the norm of x in the fiber at q.

    Maximum of the spectral norms of gns_truncation(x, N, lambda) over
    ``phases`` equispaced lambda on the circle, and (if ``characters``) of
    |x| at the characters alpha -> z, gamma -> 0 for the same sample of z.
    """
    if phases < 1:
        raise ValueError("need at least one phase")
    pts = np.exp(2j * np.pi * np.arange(phases) / phases)
    best = 0.0
    for lam in pts:
        best = max(best, float(np.linalg.norm(gns_truncation(x, N, lam), 2)))
    if characters:
        for z in pts:
            best = max(best, abs(_character_value(x, z)))
    return float(best)


def bundle_scan(monomials: Sequence, grid: Iterable, Ns: Sequence[int] = (10, 20, 40),
                phases: int = 16, h_factory=None) -> list[FiberReport]:
    """One FiberReport per grid point.

    Flags raised on a fiber: a Haar jump from the previous grid point larger
    than smoothness_budget * |dq|, and any norm bound that decreases in N.
    At q = -1 no l^2 representation exists and norm_bounds stay empty.
    ``h_factory(q)`` may substitute another state for the Haar state.
    """
    monos = [Monomial(*m) for m in monomials]
    if not monos:
        return []
    reports: list[FiberReport] = []
    prev = None
    for q in grid:
        q = qparam(q)
        h = HaarState(q) if h_factory is None else h_factory(q)
        rep = FiberReport(q)
        for mono in monos:
            rep.haar_values[mono] = mpq(h(mono))
            if abs(q) < 1:
                x = Element.monomial(q, *mono)
                bounds = [norm_lower_bound(x, n, phases) for n in Ns]
                for n, b in zip(Ns, bounds):
                    rep.norm_bounds[(mono, n)] = b
                for (n1, b1), (n2, b2) in zip(zip(Ns, bounds), zip(Ns[1:], bounds[1:])):
                    if n2 > n1 and b2 < b1 - 1e-12:
                        rep.flags.append(f"norm bound of {mono} drops from N={n1} to N={n2}")
            if prev is not None:
                jump = abs(rep.haar_values[mono] - prev.haar_values[mono])
                allowed = smoothness_budget(mono) * abs(q - prev.q)
                if jump > allowed:
                    rep.flags.append(
                        f"haar jump {format_rational(jump)} of {mono} exceeds budget {format_rational(allowed)}"
                    )
        reports.append(rep)
        prev = rep
    return reports


def reports_to_csv(reports: Sequence[FiberReport], Ns: Sequence[int] = (10, 20, 40)) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "monomial", "haar", "haar_decimal"] + [f"norm_N{n}" for n in Ns] + ["flags"])
    for rep in reports:
        for mono, val in rep.haar_values.items():
            bounds = [rep.norm_bounds.get((mono, n)) for n in Ns]
            w.writerow(
                [format_rational(rep.q), f"{mono.k},{mono.l},{mono.m}", format_rational(val), f"{float(val):.12g}"]
                + ["" if b is None else f"{b:.12g}" for b in bounds]
                + [";".join(rep.flags)]
            )
    return buf.getvalue()
