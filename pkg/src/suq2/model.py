"""The q = -1 algebra as 2x2-matrix-valued functions on SU(2) = S^3.

Points are pairs ``(a, c)`` with ``|a|^2 + |c|^2 = 1``.  Elements are sent to
matrix functions by ``alpha -> diag(a, -a)`` and ``gamma -> [[0, c], [c, 0]]``;
the Klein four-group G acts on those functions, and its fixed points are
exactly the image.  Most functions here are vectorised over arrays of
points: ``a`` and ``c`` may be scalars or equally shaped complex arrays, and
matrix-valued results carry the matrix axes last.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import Element
from .scalars import ParameterError, real_imag

__all__ = [
    "SpherePoint",
    "GroupElement",
    "IDENTITY",
    "R",
    "S",
    "RS",
    "GROUP",
    "MatFun",
    "V_R",
    "V_S",
    "V_HADAMARD",
    "coefficient_array",
    "rep_eval",
    "phi_eval",
    "phi_matfun",
    "g_action",
    "conditional_expectation",
    "symmetry_decomposition_check",
    "haar_nodes",
    "haar_quadrature",
    "haar_trace_state",
    "orbit_points",
    "orbit_canonical",
    "orbit_equal",
    "intertwiner_check",
    "separating_element",
    "pi_image",
    "separation_residuals",
    "random_sphere_points",
    "swap_automorphism",
]

TOL = 1e-12


@dataclass(frozen=True)
class SpherePoint:
    a: complex
    c: complex

    def __post_init__(self):
        a, c = complex(self.a), complex(self.c)
        norm = np.sqrt(abs(a) ** 2 + abs(c) ** 2)
        if norm == 0:
            raise ValueError("(0, 0) is not a point of the 3-sphere")
        object.__setattr__(self, "a", a / norm)
        object.__setattr__(self, "c", c / norm)

    def __iter__(self):
        yield self.a
        yield self.c

    @property
    def is_generic(self) -> bool:
        return abs(self.a) > TOL and abs(self.c) > TOL


@dataclass(frozen=True)
class GroupElement:
    """Element r^i s^j of Z/2 + Z/2; r flips the sign of a, s the sign of c."""

    r: int = 0
    s: int = 0

    def __post_init__(self):
        object.__setattr__(self, "r", self.r % 2)
        object.__setattr__(self, "s", self.s % 2)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.r + other.r, self.s + other.s)

    def act(self, p: SpherePoint) -> SpherePoint:
        return SpherePoint(-p.a if self.r else p.a, -p.c if self.s else p.c)

    def __str__(self):
        return {(0, 0): "e", (1, 0): "r", (0, 1): "s", (1, 1): "rs"}[(self.r, self.s)]


IDENTITY = GroupElement(0, 0)
R = GroupElement(1, 0)
S = GroupElement(0, 1)
RS = GroupElement(1, 1)
GROUP = (IDENTITY, R, S, RS)

V_R = np.array([[1, 0], [0, -1]], dtype=complex)
V_S = np.array([[0, 1], [1, 0]], dtype=complex)
V_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class MatFun:
    """A matrix-valued function on S^3, evaluated on arrays of points."""

    def __init__(self, evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray], n: int = 2):
        self._evaluator = evaluator
        self.n = n
        self._cache: dict = {}

    def __call__(self, a, c) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        c = np.asarray(c, dtype=complex)
        a, c = np.broadcast_arrays(a, c)
        out = np.asarray(self._evaluator(a, c), dtype=complex)
        return np.broadcast_to(out, a.shape + (self.n, self.n))

    def at(self, p: SpherePoint) -> np.ndarray:
        return self(p.a, p.c)

    def sample(self, a: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Evaluate on a grid, caching by the grid's bytes."""
        key = (np.asarray(a, dtype=complex).tobytes(), np.asarray(c, dtype=complex).tobytes())
        if key not in self._cache:
            self._cache[key] = self(a, c)
        return self._cache[key]

    def __add__(self, other: "MatFun") -> "MatFun":
        return MatFun(lambda a, c: self(a, c) + other(a, c), self.n)

    def __matmul__(self, other: "MatFun") -> "MatFun":
        return MatFun(lambda a, c: self(a, c) @ other(a, c), self.n)

    def scaled(self, s: complex) -> "MatFun":
        return MatFun(lambda a, c: s * self(a, c), self.n)

    @classmethod
    def constant(cls, matrix) -> "MatFun":
        m = np.asarray(matrix, dtype=complex)
        return cls(lambda a, c: np.broadcast_to(m, np.shape(a) + m.shape), m.shape[0])

    def to_csv(self, a: np.ndarray, c: np.ndarray, out=None) -> str:
        """Sampled values as CSV: point coordinates, then entries row-major."""
        a = np.atleast_1d(np.asarray(a, dtype=complex)).ravel()
        c = np.atleast_1d(np.asarray(c, dtype=complex)).ravel()
        vals = self(a, c).reshape(len(a), -1)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["re_a", "im_a", "re_c", "im_c"]
        for i in range(self.n):
            for j in range(self.n):
                header += [f"re_{i}{j}", f"im_{i}{j}"]
        writer.writerow(header)
        for ai, ci, row in zip(a, c, vals):
            fields = [ai.real, ai.imag, ci.real, ci.imag]
            for v in row:
                fields += [v.real, v.imag]
            writer.writerow([repr(float(f)) for f in fields])
        text = buf.getvalue()
        if out is not None:
            out.write(text)
        return text


def _require_neg1(x: Element):
    if x.q != -1:
        raise ParameterError(f"the function model describes q = -1 only, got q = {x.q}")


def coefficient_array(x: Element) -> list[tuple[int, int, int, complex]]:
    out = []
    for (k, l, m), coeff in x.sorted_items():
        re, im = real_imag(coeff)
        out.append((k, l, m, complex(float(re), float(im))))
    return out


def rep_eval(x: Element, p: SpherePoint) -> np.ndarray:
    """Image of x under the irreducible representation attached to p.

    One-dimensional characters at c = 0 and at a = 0, the 2x2 representation
    otherwise.  Evaluated by plain matrix powers of the generator images.
    """
    _require_neg1(x)
    a, c = p.a, p.c
    if abs(c) <= TOL:
        alpha, gamma = np.array([[a]]), np.zeros((1, 1), dtype=complex)
    elif abs(a) <= TOL:
        alpha, gamma = np.zeros((1, 1), dtype=complex), np.array([[c]])
    else:
        alpha = np.array([[a, 0], [0, -a]], dtype=complex)
        gamma = np.array([[0, c], [c, 0]], dtype=complex)
    return _eval_generators(x, alpha, gamma)


def _eval_generators(x: Element, alpha: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    n = alpha.shape[0]
    alpha_star = alpha.conj().T
    gamma_star = gamma.conj().T
    out = np.zeros((n, n), dtype=complex)
    mp = np.linalg.matrix_power
    for k, l, m, coeff in coefficient_array(x):
        head = mp(alpha, k) if k >= 0 else mp(alpha_star, -k)
        out += coeff * head @ mp(gamma, l) @ mp(gamma_star, m)
    return out


def phi_eval(x: Element, a, c) -> np.ndarray:
    """phi(x) evaluated at points (a, c); shape ``broadcast(a, c).shape + (2, 2)``.

    Uses the closed form phi(eta^{klm}) = diag(A, (-1)^|k| A) c^l conj(c)^m X^(l+m)
    with A = a^k (or conj(a)^|k|) and X the flip matrix.
    """
    _require_neg1(x)
    a = np.asarray(a, dtype=complex)
    c = np.asarray(c, dtype=complex)
    a, c = np.broadcast_arrays(a, c)
    out = np.zeros(a.shape + (2, 2), dtype=complex)
    ca = np.conj(a)
    cc = np.conj(c)
    for k, l, m, coeff in coefficient_array(x):
        head = a ** k if k >= 0 else ca ** (-k)
        scal = coeff * head * c ** l * cc ** m
        sign = -1 if k % 2 else 1
        if (l + m) % 2 == 0:
            out[..., 0, 0] += scal
            out[..., 1, 1] += sign * scal
        else:
            out[..., 0, 1] += scal
            out[..., 1, 0] += sign * scal
    return out


def phi_matfun(x: Element) -> MatFun:
    _require_neg1(x)
    return MatFun(lambda a, c: phi_eval(x, a, c), 2)


def g_action(g: GroupElement, F: MatFun) -> MatFun:
    """beta_g(F).  The flip r of a acts by beta_2, the flip s of c by beta_1.

    beta_1(F)(a, c) = [[f, -g], [-h, k]](a, -c)
    beta_2(F)(a, c) = [[k, h], [g, f]](-a, c)
    """
    if F.n != 2:
        raise ValueError("the G-action is defined on 2x2 matrix functions")

    def beta1(G: MatFun) -> MatFun:
        def ev(a, c):
            M = G(a, -c).copy()
            M[..., 0, 1] *= -1
            M[..., 1, 0] *= -1
            return M

        return MatFun(ev, 2)

    def beta2(G: MatFun) -> MatFun:
        def ev(a, c):
            M = G(-a, c)
            return M[..., ::-1, ::-1].copy()

        return MatFun(ev, 2)

    out = F
    if g.s:
        out = beta1(out)
    if g.r:
        out = beta2(out)
    return out


def conditional_expectation(F: MatFun) -> MatFun:
    """Average over the group, 1/4 sum_g beta_g(F): projection onto the fixed points."""
    if F.n != 2:
        raise ValueError("conditional expectation is defined on 2x2 matrix functions")
    images = [g_action(g, F) for g in GROUP]

    def ev(a, c):
        return sum(img(a, c) for img in images) / 4

    return MatFun(ev, 2)


def symmetry_decomposition_check(F: MatFun, a, c) -> float:
    """Largest violation of the symmetry relations of the four summands of F.

    F = f I + g diag(1,-1) + h [[0,1],[1,0]] + k [[0,1],[-1,0]]; F is
    G-invariant iff f = f.r = f.s, g = -g.r = g.s, h = h.r = -h.s and
    k = -k.r = -k.s, where (f.r)(a,c) = f(-a,c) and (f.s)(a,c) = f(a,-c).
    """
    if F.n != 2:
        raise ValueError("decomposition is defined on 2x2 matrix functions")
    a = np.asarray(a, dtype=complex)
    c = np.asarray(c, dtype=complex)

    def parts(M):
        return (
            (M[..., 0, 0] + M[..., 1, 1]) / 2,
            (M[..., 0, 0] - M[..., 1, 1]) / 2,
            (M[..., 0, 1] + M[..., 1, 0]) / 2,
            (M[..., 0, 1] - M[..., 1, 0]) / 2,
        )

    base = parts(F(a, c))
    flip_r = parts(F(-a, c))
    flip_s = parts(F(a, -c))
    r_signs = (1, -1, 1, -1)
    s_signs = (1, 1, -1, -1)
    worst = 0.0
    for v, vr, vs, sr, ss in zip(base, flip_r, flip_s, r_signs, s_signs):
        if v.size:
            worst = max(worst, float(np.max(np.abs(v - sr * vr))), float(np.max(np.abs(v - ss * vs))))
    return worst


def haar_nodes(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature nodes (a, c) and weights for the normalised Haar measure on SU(2).

    a = cos(t) e^{i p1}, c = sin(t) e^{i p2}; with u = sin(t)^2 the measure is
    du dp1 dp2 / (2 pi)^2 on [0,1] x [0,2pi)^2.  Gauss-Legendre in u with
    ``order`` nodes, trapezoid with ``2*order`` nodes in each angle.
    """
    if order < 2:
        raise ValueError("quadrature order must be at least 2")
    x, w = np.polynomial.legendre.leggauss(order)
    u = (x + 1) / 2
    wu = w / 2
    n_ang = 2 * order
    phis = 2 * np.pi * np.arange(n_ang) / n_ang
    U, P1, P2 = np.meshgrid(u, phis, phis, indexing="ij")
    W = np.broadcast_to(wu[:, None, None], U.shape) / n_ang**2
    a = np.sqrt(1 - U) * np.exp(1j * P1)
    c = np.sqrt(U) * np.exp(1j * P2)
    return a.ravel(), c.ravel(), W.ravel()


def haar_quadrature(f: Callable, order: int = 32):
    """Normalised Haar integral of a scalar or matrix function of (a, c)."""
    a, c, w = haar_nodes(order)
    vals = np.asarray(f(a, c))
    if vals.ndim == 1:
        return complex(np.dot(w, vals))
    return np.tensordot(w, vals, axes=(0, 0))


def haar_trace_state(x: Element, order: int = 32) -> complex:
    """Haar integral of the normalised trace of phi(x); equals h_{-1}(x)."""
    _require_neg1(x)
    return haar_quadrature(lambda a, c: np.trace(phi_eval(x, a, c), axis1=-2, axis2=-1) / 2, order)


# spectrum --------------------------------------------------------------------

def orbit_points(p: SpherePoint, tol: float = TOL) -> list[SpherePoint]:
    """Distinct points of the G-orbit of p (as a subset of S^3)."""
    pts: list[SpherePoint] = []
    for g in GROUP:
        x = g.act(p)
        if not any(abs(x.a - y.a) <= tol and abs(x.c - y.c) <= tol for y in pts):
            pts.append(x)
    return pts


def _key(z: complex) -> tuple[float, float]:
    return (round(z.real, 12), round(z.imag, 12))


def orbit_canonical(p: SpherePoint, tol: float = TOL) -> SpherePoint:
    """Representative of the class of p in the spectrum's quotient space.

    Points with a = 0 or c = 0 are their own class.  Otherwise signs are chosen
    to make (Re a, Im a) and then (Re c, Im c) lexicographically maximal.
    """
    if abs(p.a) <= tol or abs(p.c) <= tol:
        return p
    a = p.a if _key(p.a) >= _key(-p.a) else -p.a
    c = p.c if _key(p.c) >= _key(-p.c) else -p.c
    return SpherePoint(a, c)


def orbit_equal(p: SpherePoint, p2: SpherePoint, tol: float = 1e-10) -> bool:
    gen1, gen2 = p.is_generic, p2.is_generic
    if gen1 != gen2:
        return False
    if gen1:
        return abs(p.a**2 - p2.a**2) <= tol and abs(p.c**2 - p2.c**2) <= tol
    return abs(p.a - p2.a) <= tol and abs(p.c - p2.c) <= tol


def _two_dim_rep(a: complex, c: complex) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.array([[a, 0], [0, -a]], dtype=complex),
        np.array([[0, c], [c, 0]], dtype=complex),
    )


def intertwiner_check(p: SpherePoint, g: GroupElement) -> float:
    """max over x in {alpha, gamma} of ||v pi_p(x) v* - pi_{g.p}(x)||.

    v_s implements the flip of a, v_r the flip of c.
    """
    if not p.is_generic:
        raise ValueError("intertwiners are defined at points with a*c != 0")
    v = np.eye(2, dtype=complex)
    if g.r:
        v = V_S @ v
    if g.s:
        v = V_R @ v
    gp = g.act(p)
    src = _two_dim_rep(p.a, p.c)
    dst = _two_dim_rep(gp.a, gp.c)
    return max(float(np.linalg.norm(v @ x @ v.conj().T - y, 2)) for x, y in zip(src, dst))


def _geodesic(a1, c1, a2, c2):
    dot = (a1 * np.conj(a2) + c1 * np.conj(c2)).real
    return np.arccos(np.clip(dot, -1.0, 1.0))


def _bump(d, rho):
    d = np.asarray(d, dtype=float)
    out = np.zeros_like(d)
    inside = d < rho
    x = d[inside] / rho
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x * x))
    return out


def swap_automorphism(F: MatFun) -> MatFun:
    """The automorphism exchanging alpha and gamma: F -> v F(c, a) v*, v the Hadamard symmetry."""
    v = V_HADAMARD
    return MatFun(lambda a, c: v @ F(c, a) @ v.conj().T, 2)


def separating_element(M: Sequence[SpherePoint], target: SpherePoint) -> MatFun:
    """A G-invariant matrix function vanishing on the classes of M, nonzero at target.

    Generic case: a smooth bump times the identity, centred on every point of
    the target's orbit with radius half the distance to the orbits of M.
    When target = (b, 0) and (-b, 0) lies in M the two characters at +-b must
    be separated, which a scalar bump cannot do; then the function
    diag((f + f.s)/2, ((f + f.s)/2).r) is used with a bump f around (b, 0).
    The case a = 0 is reduced to c = 0 by the alpha/gamma swap.
    """
    M = list(M)
    if any(orbit_equal(m, target) for m in M):
        raise ValueError("target class belongs to M")
    if not M:
        return MatFun.constant(np.eye(2))

    forbidden = [x for m in M for x in orbit_points(m)]
    t_orbit = orbit_points(target)
    clash = any(
        abs(x.a - y.a) <= 1e-12 and abs(x.c - y.c) <= 1e-12 for x in t_orbit for y in forbidden
    )
    if not clash:
        dists = [float(_geodesic(x.a, x.c, y.a, y.c)) for x in t_orbit for y in forbidden]
        dists += [
            float(_geodesic(x.a, x.c, y.a, y.c))
            for i, x in enumerate(t_orbit)
            for y in t_orbit[i + 1:]
        ]
        rho = min(dists) / 2

        def ev(a, c):
            b = sum(_bump(_geodesic(a, c, x.a, x.c), rho) for x in t_orbit)
            return b[..., None, None] * np.eye(2)

        return conditional_expectation(MatFun(ev, 2))

    if abs(target.a) <= TOL:
        swapped = [SpherePoint(m.c, m.a) for m in M]
        inner = separating_element(swapped, SpherePoint(target.c, target.a))
        return swap_automorphism(inner)

    # target = (b, 0) and (-b, 0) in M
    # r maps the clashing point (-b, 0) onto the target; that orbit point is
    # harmless because the character at (-b, 0) reads the (0, 0) entry, whose
    # bump sits at geodesic distance pi
    b = target.a
    dists = [
        float(_geodesic(b, 0, y.a, y.c))
        for y in forbidden
        if abs(y.a - b) > 1e-12 or abs(y.c) > 1e-12
    ]
    rho = min(dists) / 2

    def f_sym(a, c):
        return (_bump(_geodesic(a, c, b, 0), rho) + _bump(_geodesic(a, -c, b, 0), rho)) / 2

    def ev(a, c):
        out = np.zeros(np.shape(a) + (2, 2), dtype=complex)
        out[..., 0, 0] = f_sym(a, c)
        out[..., 1, 1] = f_sym(-a, c)
        return out

    return conditional_expectation(MatFun(ev, 2))


def pi_image(F: MatFun, p: SpherePoint) -> np.ndarray:
    """The image of a G-invariant function under the irreducible representation at p."""
    val = F.at(p)
    if abs(p.c) <= TOL:
        return val[:1, :1]
    if abs(p.a) <= TOL:
        v = V_HADAMARD
        return (v.conj().T @ val @ v)[:1, :1]
    return val


def separation_residuals(F: MatFun, M: Iterable[SpherePoint], target: SpherePoint) -> tuple[float, float]:
    """(max norm of pi-images over M, smallest singular value of the pi-image at target)."""
    on_m = max((float(np.linalg.norm(pi_image(F, m), 2)) for m in M), default=0.0)
    at_t = float(np.linalg.svd(pi_image(F, target), compute_uv=False).min())
    return on_m, at_t


def random_sphere_points(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    z = rng.standard_normal((n, 4))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z[:, 0] + 1j * z[:, 1], z[:, 2] + 1j * z[:, 3]
