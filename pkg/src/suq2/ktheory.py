"""Explicit K-theory witnesses for C(SU_{-1}(2)).

Projection paths, exponential loops, the Bott lift on the disk, the positive
lifts over the set X_3 = {Im a, Im c >= 0, Im a * Im c = 0}, and a numerical
degree for maps S^3 -> U(n).  Every witness is a concrete matrix function;
invariants are windings of determinants or diagonal entries and the
normalised integral of tr((u^-1 du)^3).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import make_uq
from .model import V_R, V_S, MatFun, phi_eval

__all__ = [
    "ResolutionError",
    "PathProjection",
    "LoopUnitary",
    "SphereUnitary",
    "p0",
    "q0",
    "P0",
    "Q0",
    "p_tilde",
    "q_tilde",
    "ENDPOINT_TABLE",
    "boundary_compatibility",
    "projection_residual",
    "winding_number",
    "expi_hermitian",
    "exp_loop",
    "det_winding",
    "bott_lift",
    "bott_projection_check",
    "disk_grid",
    "lam",
    "a3_lift",
    "a3_exp",
    "a3_winding_pair",
    "A3_CLOSURE_ENDPOINTS",
    "u1",
    "x_unitary",
    "y_unitary",
    "block_diag",
    "degree3_value",
    "degree3",
    "phi_u",
    "phi_u_degree",
]

ROUND_TOL = 0.05


class ResolutionError(ArithmeticError):
    """A numerical invariant could not be resolved to an integer; refine the grid."""


@dataclass(frozen=True)
class PathProjection:
    """A path t in [0, 1] -> 2x2 projection."""

    evaluator: Callable[[float], np.ndarray]
    name: str = ""

    def __call__(self, t) -> np.ndarray:
        return self.evaluator(t)


@dataclass(frozen=True)
class LoopUnitary:
    """A closed loop theta in [0, 2pi) -> n x n unitary."""

    evaluator: Callable[[float], np.ndarray]
    n: int
    name: str = ""

    def __call__(self, theta) -> np.ndarray:
        return self.evaluator(theta)


class SphereUnitary(MatFun):
    """A unitary-valued matrix function on S^3, vectorised over points."""


# -- projections on [0, 1] ------------------------------------------------------

def _check_unit_interval(t):
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise ValueError("path parameter must lie in [0, 1]")
    return t


def _off(t):
    return np.sqrt(np.maximum(t / 2 - t * t / 4, 0.0))


def p0(t) -> np.ndarray:
    """[[1 - t/2, w], [w, t/2]] with w = sqrt(t/2 - t^2/4)."""
    t = _check_unit_interval(t)
    w = _off(t)
    return np.stack([np.stack([1 - t / 2, w], -1), np.stack([w, t / 2], -1)], -2).astype(complex)


def q0(t) -> np.ndarray:
    """[[t/2, w], [w, 1 - t/2]] with w = sqrt(t/2 - t^2/4)."""
    t = _check_unit_interval(t)
    w = _off(t)
    return np.stack([np.stack([t / 2, w], -1), np.stack([w, 1 - t / 2], -1)], -2).astype(complex)


P0 = PathProjection(p0, "p0")
Q0 = PathProjection(q0, "q0")


def projection_residual(p: PathProjection, n: int = 1001) -> float:
    """max over an n-point grid of ||p^2 - p|| and ||p* - p||."""
    P = p(np.linspace(0.0, 1.0, n))
    idem = np.abs(P @ P - P).max()
    herm = np.abs(P - np.conj(np.swapaxes(P, -1, -2))).max()
    return float(max(idem, herm))


def boundary_compatibility(p: PathProjection, tol: float = 1e-12) -> bool:
    """True iff p(0) commutes with v_r and p(1) commutes with v_s."""
    start = np.asarray(p(0.0))
    end = np.asarray(p(1.0))
    ok0 = np.abs(start @ V_R - V_R @ start).max() <= tol
    ok1 = np.abs(end @ V_S - V_S @ end).max() <= tol
    return bool(ok0 and ok1)


def _x2_parameter(a: float, c: float, tol: float) -> float:
    # arc length on the quarter circle, (1,0) -> 0 and (0,1) -> 1, exact at the ends
    if abs(c) <= tol:
        return 0.0
    if abs(a) <= tol:
        return 1.0
    return float(2 / np.pi * np.arctan2(abs(c), abs(a)))


def _extend(path: Callable, a: float, c: float, tol: float) -> np.ndarray:
    a = float(np.real(a))
    c = float(np.real(c))
    M = np.asarray(path(_x2_parameter(a, c, tol)))
    if c < -tol:
        M = V_R @ M @ V_R
    if a < -tol:
        M = V_S @ M @ V_S
    return M


def p_tilde(a, c, tol: float = 1e-12) -> np.ndarray:
    """The extension of p0 to the circle X_2 of real points (a, c)."""
    return _extend(p0, a, c, tol)


def q_tilde(a, c, tol: float = 1e-12) -> np.ndarray:
    """The extension of q0 to the circle X_2 of real points (a, c)."""
    return _extend(q0, a, c, tol)


_H = 0.5
ENDPOINT_TABLE = {
    ("p", 1, 0): np.array([[1, 0], [0, 0]], dtype=complex),
    ("p", -1, 0): np.array([[0, 0], [0, 1]], dtype=complex),
    ("p", 0, 1): np.array([[_H, _H], [_H, _H]], dtype=complex),
    ("p", 0, -1): np.array([[_H, -_H], [-_H, _H]], dtype=complex),
    ("q", 1, 0): np.array([[0, 0], [0, 1]], dtype=complex),
    ("q", -1, 0): np.array([[1, 0], [0, 0]], dtype=complex),
    ("q", 0, 1): np.array([[_H, _H], [_H, _H]], dtype=complex),
    ("q", 0, -1): np.array([[_H, -_H], [-_H, _H]], dtype=complex),
}


# -- windings -------------------------------------------------------------------

def winding_number(loop: Callable[[np.ndarray], np.ndarray], samples: int = 2048,
                   max_step: float = 0.75 * np.pi, min_modulus: float = 1e-10) -> int:
    """Winding number about 0 of a closed loop theta in [0, 2pi] -> C.

    The loop is sampled at ``samples`` equal steps, including theta = 2pi as the
    closing limit.  Raises :class:`ResolutionError` if a single phase step
    exceeds ``max_step`` or the loop comes within ``min_modulus`` of zero.
    """
    if samples < 4:
        raise ValueError("need at least 4 samples")
    theta = np.linspace(0.0, 2 * np.pi, samples + 1)
    z = np.asarray(loop(theta), dtype=complex)
    if np.abs(z).min() < min_modulus:
        raise ResolutionError("loop passes through zero")
    steps = np.angle(z[1:] / z[:-1])
    if np.abs(steps).max() > max_step:
        raise ResolutionError(
            f"phase step {np.abs(steps).max():.3f} too large at {samples} samples; increase samples"
        )
    total = steps.sum() / (2 * np.pi)
    w = int(round(total))
    if abs(total - w) > 1e-6:
        raise ResolutionError(f"loop does not close: net phase {total:.6f} turns")
    return w


def expi_hermitian(H: np.ndarray) -> np.ndarray:
    """exp(2 pi i H) for (stacks of) Hermitian matrices via the spectral decomposition."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(2j * np.pi * w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def _f(j: int, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    z = np.zeros(t.shape)
    h = t / 2
    rows = {
        1: [[1 - t, z], [z, z]],
        2: [[z, z], [z, 1 - t]],
        3: [[h, h], [h, h]],
        4: [[h, -h], [-h, h]],
    }[j]
    return np.stack([np.stack(r, -1) for r in rows], -2).astype(complex)


def exp_loop(j: int) -> LoopUnitary:
    """theta -> exp(2 pi i f_j(theta / 2pi)) for the four paths f_1..f_4.

    f_1 = diag(1-t, 0), f_2 = diag(0, 1-t), f_3 = t/2 [[1,1],[1,1]],
    f_4 = t/2 [[1,-1],[-1,1]].  Each f_j has integer spectrum at both ends, so
    the exponentials close up.
    """
    if j not in (1, 2, 3, 4):
        raise ValueError("exp_loop index must be 1, 2, 3 or 4")
    return LoopUnitary(lambda theta: expi_hermitian(_f(j, np.asarray(theta) / (2 * np.pi))), 2, f"exp(2 pi i f{j})")


def det_winding(loop: LoopUnitary, samples: int = 2048) -> int:
    return winding_number(lambda th: np.linalg.det(loop(th)), samples)


# -- Bott lift ------------------------------------------------------------------

def _bott_s(t: np.ndarray) -> np.ndarray:
    gap = 1 - np.abs(t) ** 2
    # |t| = 1 in exact arithmetic can leave gap ~ 1e-16, whose root is ~ 1e-8
    return np.where(gap <= 8 * np.finfo(float).eps, 0.0, np.sqrt(np.maximum(gap, 0.0)))


def bott_lift(t) -> np.ndarray:
    """The 4x4 unitary with t, -s / s, conj(t) in rows and columns 0, 2 and ones at 1, 3.

    s = sqrt(1 - |t|^2); on |t| = 1 this is diag(t, 1, conj(t), 1).
    """
    t = np.asarray(t, dtype=complex)
    if np.any(np.abs(t) > 1 + 1e-12):
        raise ValueError("bott_lift needs |t| <= 1")
    s = _bott_s(t)
    u = np.zeros(t.shape + (4, 4), dtype=complex)
    u[..., 0, 0] = t
    u[..., 0, 2] = -s
    u[..., 2, 0] = s
    u[..., 2, 2] = np.conj(t)
    u[..., 1, 1] = 1
    u[..., 3, 3] = 1
    return u


def disk_grid(n: int = 100, seed: int = 0, boundary: int = 0) -> np.ndarray:
    """n points in the closed unit disk: a polar lattice plus ``boundary`` points on the circle."""
    k = int(np.ceil(np.sqrt(n)))
    r = np.linspace(0.0, 1.0, k)
    th = 2 * np.pi * np.arange(k) / k
    pts = (r[:, None] * np.exp(1j * th[None, :])).ravel()[:n]
    if boundary:
        rng = np.random.default_rng(seed)
        pts = np.concatenate([pts, np.exp(2j * np.pi * rng.random(boundary))])
    return pts


def bott_projection_check(grid=None) -> float:
    """max ||u diag(1,1,0,0) u* - expected|| over the grid.

    The expected projection has B(t) = [[|t|^2, t s], [conj(t) s, 1 - |t|^2]]
    on indices {0, 2}, a 1 at (1, 1) and zeros elsewhere.
    """
    t = disk_grid() if grid is None else np.asarray(grid, dtype=complex)
    u = bott_lift(t)
    proj = u @ np.diag([1, 1, 0, 0]).astype(complex) @ np.conj(np.swapaxes(u, -1, -2))
    s = _bott_s(t)
    exp = np.zeros_like(proj)
    exp[..., 0, 0] = np.abs(t) ** 2
    exp[..., 0, 2] = t * s
    exp[..., 2, 0] = np.conj(t) * s
    exp[..., 2, 2] = 1 - np.abs(t) ** 2
    exp[..., 1, 1] = 1
    return float(np.abs(proj - exp).max())


# -- lifts over X_3 -------------------------------------------------------------

A3_CLOSURE_ENDPOINTS = ((1.0, 0.0), (-1.0, 0.0))


def lam(a) -> np.ndarray:
    """exp(-2 pi i Im(a)^2)."""
    return np.exp(-2j * np.pi * np.imag(a) ** 2)


def a3_lift(which: str, a: complex, c: complex, tol: float = 1e-12) -> np.ndarray:
    """The positive lift of p~ (which='p') or q~ (which='q') at a point of X_3."""
    if which not in ("p", "q"):
        raise ValueError("which must be 'p' or 'q'")
    a, c = complex(a), complex(c)
    if abs(abs(a) ** 2 + abs(c) ** 2 - 1) > 1e-9:
        raise ValueError("point is not on the 3-sphere")
    ia, ic = a.imag, c.imag
    if ia < -tol or ic < -tol or abs(ia * ic) > tol:
        raise ValueError(f"({a}, {c}) is not in X_3")
    if abs(ia - 1) <= tol or abs(ic - 1) <= tol:
        return np.zeros((2, 2), dtype=complex)
    norm = np.hypot(a.real, c.real)
    base = (p_tilde if which == "p" else q_tilde)(a.real / norm, c.real / norm, tol)
    weight = 1 - ia**2 if abs(ic) <= tol else 1 - ic**2
    return weight * base


def a3_exp(which: str, a: complex, c: complex) -> np.ndarray:
    return expi_hermitian(a3_lift(which, a, c))


def a3_winding_pair(which: str, samples: int = 2048) -> tuple[int, int]:
    """Windings of the diagonal entries of exp(2 pi i lift) over the closure of V_2.

    V_2 = {(a, 0) : Im a > 0} is traversed as a = e^{i phi}, phi from 0 to pi,
    and closed at the endpoints (1, 0) and (-1, 0) where the exponential is
    the identity.
    """
    def entry(i):
        def loop(theta):
            vals = [a3_exp(which, np.exp(1j * th / 2), 0.0) for th in np.atleast_1d(theta)]
            return np.array([v[i, i] for v in vals])

        return loop

    return winding_number(entry(0), samples), winding_number(entry(1), samples)


# -- degree of maps S^3 -> U(n) -------------------------------------------------

def u1(a, c) -> np.ndarray:
    """[[a, -conj(c)], [c, conj(a)]]."""
    a, c = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(c, dtype=complex))
    return np.stack([np.stack([a, -np.conj(c)], -1), np.stack([c, np.conj(a)], -1)], -2)


def x_unitary(a, c) -> np.ndarray:
    """[[a, conj(c)], [c, -conj(a)]]."""
    return u1(a, c) @ np.diag([1, -1]).astype(complex)


def y_unitary(a, c) -> np.ndarray:
    """[[-a, conj(c)], [c, conj(a)]]."""
    return np.diag([-1, 1]).astype(complex) @ u1(a, c)


def block_diag(*funcs: Callable) -> Callable:
    def ev(a, c):
        blocks = [np.asarray(f(a, c)) for f in funcs]
        n = sum(b.shape[-1] for b in blocks)
        shape = np.broadcast(np.asarray(a), np.asarray(c)).shape
        out = np.zeros(shape + (n, n), dtype=complex)
        i = 0
        for b in blocks:
            k = b.shape[-1]
            out[..., i:i + k, i:i + k] = b
            i += k
        return out

    return ev


def _euler_points(theta, p1, p2):
    return np.cos(theta) * np.exp(1j * p1), np.sin(theta) * np.exp(1j * p2)


def degree3_value(u: Callable, resolution: int = 48) -> float:
    """Unrounded degree of u: S^3 -> U(n) from the normalised integral of tr((u^-1 du)^3).

    Coordinates a = cos(th) e^{i p1}, c = sin(th) e^{i p2} with th in [0, pi/2]
    sampled at half-step offsets and p1, p2 periodic.  Derivatives are central
    differences, second-order one-sided at the two th boundary layers.  The
    sign is normalised so that u1 has degree +1.
    """
    R = int(resolution)
    if R < 24:
        raise ValueError("resolution must be at least 24")
    ht = (np.pi / 2) / R
    hp = 2 * np.pi / R
    th = (np.arange(R) + 0.5) * ht
    ph = hp * np.arange(R)
    P1, P2 = np.meshgrid(ph, ph, indexing="ij")

    cache: dict[int, np.ndarray] = {}

    def slice_(i):
        if i not in cache:
            cache[i] = np.asarray(u(*_euler_points(th[i], P1, P2)), dtype=complex)
            for old in [k for k in cache if k < i - 2]:
                del cache[old]
        return cache[i]

    total = 0.0
    for i in range(R):
        U = slice_(i)
        if i == 0:
            dth = (-3 * U + 4 * slice_(1) - slice_(2)) / (2 * ht)
        elif i == R - 1:
            dth = (3 * U - 4 * slice_(R - 2) + slice_(R - 3)) / (2 * ht)
        else:
            dth = (slice_(i + 1) - slice_(i - 1)) / (2 * ht)
        d1 = (np.roll(U, -1, axis=0) - np.roll(U, 1, axis=0)) / (2 * hp)
        d2 = (np.roll(U, -1, axis=1) - np.roll(U, 1, axis=1)) / (2 * hp)
        Uh = np.conj(np.swapaxes(U, -1, -2))
        A0, A1, A2 = Uh @ dth, Uh @ d1, Uh @ d2
        comm = A1 @ A2 - A2 @ A1
        integrand = 3 * np.trace(A0 @ comm, axis1=-2, axis2=-1)
        total += integrand.sum().real
    integral = total * ht * hp * hp
    # orientation: with these coordinates tr((u1^-1 du1)^3) integrates to -24 pi^2
    return float(-integral / (24 * np.pi**2))


def degree3(u: Callable, resolution: int = 48) -> int:
    """degree3_value rounded to an integer; ResolutionError if it is not within 0.05."""
    v = degree3_value(u, resolution)
    n = int(round(v))
    if abs(v - n) > ROUND_TOL:
        raise ResolutionError(f"degree estimate {v:.4f} is not within {ROUND_TOL} of an integer; raise resolution")
    return n


def phi_u(a, c) -> np.ndarray:
    """The 4x4 unitary obtained by applying phi entrywise to u_{-1} = [[alpha, gamma*], [gamma, alpha*]]."""
    U = make_uq(-1)
    shape = np.broadcast(np.asarray(a), np.asarray(c)).shape
    out = np.zeros(shape + (4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            out[..., 2 * i:2 * i + 2, 2 * j:2 * j + 2] = phi_eval(U[i, j], a, c)
    return out


def phi_u_degree(resolution: int = 48) -> int:
    return degree3(phi_u, resolution)
