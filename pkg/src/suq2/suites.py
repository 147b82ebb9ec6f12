"""Verification suites: each returns a list of VerificationRecords."""

from __future__ import annotations

import random

import numpy as np
from gmpy2 import mpq

from . import bundle, ktheory, model
from .algebra import AlgMatrix, Element, basis_monomials, generators, make_uq, mat_star, random_element
from .haar import HaarState, haar_monomial, invariance_residuals, recursion_check_neg1
from .hopf import closed_form_neg1, coproduct, delta_left, delta_right, tensor_star
from .report import VerificationRecord as VR
from .scalars import format_rational

__all__ = [
    "relations_suite",
    "property_suite",
    "coproduct_suite",
    "haar_suite",
    "fixedpoint_suite",
    "spectrum_suite",
    "ktheory_suite",
    "bundle_suite",
    "random_configuration",
    "KTHEORY_CHECKS",
]


def relations_suite(q) -> list[VR]:
    g = generators(q)
    a, A, c, C = g["a"], g["A"], g["g"], g["G"]
    one = Element.scalar(q)
    qq = a.q
    rels = {
        "alpha* alpha + gamma* gamma = 1": A * a + C * c - one,
        "alpha alpha* + q^2 gamma* gamma = 1": a * A + (C * c).scale(qq * qq) - one,
        "gamma gamma* = gamma* gamma": c * C - C * c,
        "alpha gamma = q gamma alpha": a * c - (c * a).scale(qq),
        "alpha gamma* = q gamma* alpha": a * C - (C * a).scale(qq),
    }
    out = [VR.check(f"relation: {name}", "defining relations", str(r), "0") for name, r in rels.items()]
    U = make_uq(q)
    I2 = AlgMatrix.identity(q)
    out.append(VR.check("u_q u_q* = 1", "fundamental unitary", U @ mat_star(U) == I2, True))
    out.append(VR.check("u_q* u_q = 1", "fundamental unitary", mat_star(U) @ U == I2, True))
    return out


def property_suite(q, degree: int = 3, seed: int = 0, trials: int = 20) -> list[VR]:
    rng = random.Random(seed)
    assoc = invol = anti = 0
    for _ in range(trials):
        x, y, z = (random_element(rng, q, degree) for _ in range(3))
        assoc += (x * y) * z != x * (y * z)
        invol += x.star().star() != x
        anti += (x * y).star() != y.star() * x.star()
    anchor = f"random elements, seed {seed}"
    return [
        VR.check("associativity failures", anchor, assoc, 0),
        VR.check("involution failures", anchor, invol, 0),
        VR.check("anti-multiplicativity failures", anchor, anti, 0),
    ]


def coproduct_suite(q, degree: int = 3, seed: int = 0, trials: int = 10) -> list[VR]:
    monos = basis_monomials(degree)
    coassoc = 0
    for mono in monos:
        D = coproduct(Element.monomial(q, *mono))
        coassoc += delta_left(D) != delta_right(D)
    rng = random.Random(seed)
    hom = starhom = 0
    for _ in range(trials):
        x, y = random_element(rng, q, max(1, degree - 1)), random_element(rng, q, max(1, degree - 1))
        hom += coproduct(x * y) != coproduct(x) * coproduct(y)
        starhom += coproduct(x.star()) != tensor_star(coproduct(x))
    out = [
        VR.check("coassociativity failures", f"all |k|,l,m <= {degree}", coassoc, 0),
        VR.check("coproduct multiplicativity failures", f"random pairs, seed {seed}", hom, 0),
        VR.check("coproduct *-preservation failures", f"random elements, seed {seed}", starhom, 0),
    ]
    if mpq(q) == -1:
        bad = sum(
            coproduct(Element.monomial(q, *m)) != closed_form_neg1(*m) for m in monos if m.k >= 0
        )
        out.append(VR.check("closed form at q=-1 mismatches", "binomial coproduct formula", bad, 0))
    return out


def haar_suite(q, degree: int = 3) -> list[VR]:
    out = []
    h = HaarState(q)
    bad = []
    for mono in basis_monomials(degree):
        r1, r2 = invariance_residuals(Element.monomial(q, *mono), h)
        if r1 or r2:
            bad.append(str(mono))
    out.append(VR.check("invariance residual failures", f"all |k|,l,m <= {degree}", len(bad), 0))
    qq = mpq(q)
    if qq == -1:
        for m in range(7):
            out.append(VR.check(f"h(eta^(0,{m},{m}))", "value 1/(m+1)", haar_monomial(0, m, m, qq), mpq(1, m + 1)))
        rec = [recursion_check_neg1(m) for m in range(1, 9)]
        out.append(VR.check("recursion m=1..8", "coefficient of eta^(0,1,1)", [format_rational(v) for v in rec], ["0"] * 8))
    elif abs(qq) < 1:
        out.append(
            VR.check(
                "h(eta^(0,1,1))",
                "closed form (1-q^2)/(1-q^4)",
                haar_monomial(0, 1, 1, qq),
                (1 - qq**2) / (1 - qq**4),
            )
        )
    return out


def fixedpoint_suite(seed: int = 0, n_elements: int = 50, n_points: int = 1000, degree: int = 3) -> list[VR]:
    q = -1
    rng = random.Random(seed)
    a, c = model.random_sphere_points(np.random.default_rng(seed), n_points)
    worst_sym = worst_fix = worst_idem = 0.0
    for _ in range(n_elements):
        x = random_element(rng, q, degree)
        F = model.phi_matfun(x)
        worst_sym = max(worst_sym, model.symmetry_decomposition_check(F, a, c))
        E = model.conditional_expectation(F)
        worst_fix = max(worst_fix, float(np.abs(E(a, c) - F(a, c)).max()))
        # idempotence on a non-invariant function
        G = F @ model.MatFun.constant([[1, 2j], [0, -1]])
        EG = model.conditional_expectation(G)
        worst_idem = max(worst_idem, float(np.abs(model.conditional_expectation(EG)(a, c) - EG(a, c)).max()))
    anchor = f"{n_elements} random elements, {n_points} points, seed {seed}"
    return [
        VR.check("symmetry decomposition residual", anchor, worst_sym, 0.0, 1e-12),
        VR.check("E fixes phi-images", anchor, worst_fix, 0.0, 1e-12),
        VR.check("E idempotent", anchor, worst_idem, 0.0, 1e-12),
    ]


def random_configuration(rng: np.random.Generator, max_m: int = 4):
    """Random (M, target) with generic and degenerate points; the target class is not in M."""

    def point():
        kind = rng.integers(3)
        if kind == 0:
            a, c = model.random_sphere_points(rng, 1)
            return model.SpherePoint(a[0], c[0])
        z = np.exp(2j * np.pi * rng.integers(8) / 8)
        return model.SpherePoint(z, 0) if kind == 1 else model.SpherePoint(0, z)

    while True:
        M = [point() for _ in range(int(rng.integers(1, max_m + 1)))]
        target = point()
        if rng.random() < 0.4 and not target.is_generic:
            # force the hardest case: the reflected degenerate point is in M
            M[0] = model.SpherePoint(-target.a, -target.c)
        if not any(model.orbit_equal(m, target) for m in M):
            return M, target


def spectrum_suite(seed: int = 0, n_points: int = 100, n_configs: int = 10) -> list[VR]:
    rng = np.random.default_rng(seed)
    a, c = model.random_sphere_points(rng, n_points)
    worst = 0.0
    for ai, ci in zip(a, c):
        p = model.SpherePoint(ai, ci)
        for g in model.GROUP:
            worst = max(worst, model.intertwiner_check(p, g))
    failures = 0
    for _ in range(n_configs):
        M, t = random_configuration(rng)
        F = model.separating_element(M, t)
        on_m, at_t = model.separation_residuals(F, M, t)
        failures += not (on_m <= 1e-12 and at_t >= 1e-6)
    return [
        VR.check("intertwiner residual", f"{n_points} random points, seed {seed}", worst, 0.0, 1e-12),
        VR.check("separating element failures", f"{n_configs} random configurations, seed {seed}", failures, 0),
    ]


KTHEORY_CHECKS = ("a2", "bott", "a3", "degree", "phi-degree")


def _degree_record(name, anchor, f, expected, res):
    try:
        val = ktheory.degree3(f, res)
    except ktheory.ResolutionError as exc:
        return VR.failure(name, anchor, str(exc))
    return VR.check(name, anchor, val, expected)


def ktheory_suite(checks=KTHEORY_CHECKS, res: int = 48) -> list[VR]:
    out = []
    if "a2" in checks:
        for P in (ktheory.P0, ktheory.Q0):
            out.append(VR.check(f"{P.name} projection residual", "1001-point grid", ktheory.projection_residual(P), 0.0, 1e-12))
            out.append(VR.check(f"{P.name} boundary compatibility", "endpoint commutation", ktheory.boundary_compatibility(P), True))
        bad = 0
        for (which, a, c), M in ktheory.ENDPOINT_TABLE.items():
            f = ktheory.p_tilde if which == "p" else ktheory.q_tilde
            bad += not np.array_equal(f(a, c), M)
        out.append(VR.check("endpoint table mismatches", "eight endpoint matrices", bad, 0))
        sig = [ktheory.det_winding(ktheory.exp_loop(j)) for j in (1, 2, 3, 4)]
        out.append(VR.check("det-winding signature", "exp(2 pi i f_j), j=1..4", sig, [-1, -1, 1, 1]))
    if "bott" in checks:
        grid = ktheory.disk_grid(100)
        u = ktheory.bott_lift(grid)
        unit = float(np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - np.eye(4)).max())
        out.append(VR.check("bott lift unitarity", "100-point disk grid", unit, 0.0, 1e-14))
        z = np.exp(2j * np.pi * np.arange(16) / 16)
        bd = float(max(np.abs(ktheory.bott_lift(zz) - np.diag([zz, 1, np.conj(zz), 1])).max() for zz in z))
        out.append(VR.check("bott lift boundary", "diag(z,1,conj z,1)", bd, 0.0, 1e-14))
        out.append(VR.check("bott projection residual", "100-point disk grid", ktheory.bott_projection_check(grid), 0.0, 1e-12))
    if "a3" in checks:
        out.extend(a3_records())
    if "degree" in checks:
        for name, f in (("u1", ktheory.u1), ("x", ktheory.x_unitary), ("y", ktheory.y_unitary)):
            out.append(_degree_record(f"degree3({name})", f"resolution {res}", f, 1, res))
    if "phi-degree" in checks:
        out.append(_degree_record("phi_u_degree", f"resolution {res}", ktheory.phi_u, 2, res))
    return out


def a3_records() -> list[VR]:
    out = []
    zero = max(
        float(np.abs(ktheory.a3_lift(w, a, c)).max())
        for w in "pq"
        for a, c in ((1j, 0), (0, 1j))
    )
    out.append(VR.check("a3 lift at Im=1", "zero matrix", zero, 0.0, 1e-12))
    worst = 0.0
    for phi in np.linspace(0.01, np.pi - 0.01, 57):
        a = np.exp(1j * phi)
        lamv = complex(ktheory.lam(a))
        if abs(a.real) < 1e-12:
            expect_p = expect_q = np.eye(2)
        elif a.real > 0:
            expect_p, expect_q = np.diag([lamv, 1]), np.diag([1, lamv])
        else:
            expect_p, expect_q = np.diag([1, lamv]), np.diag([lamv, 1])
        worst = max(
            worst,
            float(np.abs(ktheory.a3_exp("p", a, 0) - expect_p).max()),
            float(np.abs(ktheory.a3_exp("q", a, 0) - expect_q).max()),
        )
    out.append(VR.check("a3 case values on V2", "diag(lambda,1) / diag(1,lambda)", worst, 0.0, 1e-12))
    v1 = max(
        float(np.abs(ktheory.a3_exp("p", 0, np.exp(1j * phi)) - ktheory.a3_exp("q", 0, np.exp(1j * phi))).max())
        for phi in np.linspace(0.0, np.pi, 41)
    )
    out.append(VR.check("exp(2 pi i p) = exp(2 pi i q) on V1", "41 points", v1, 0.0, 1e-12))
    wp, wq = ktheory.a3_winding_pair("p"), ktheory.a3_winding_pair("q")
    ok = abs(wp[0]) == 1 and wp[1] == -wp[0] and wq == (-wp[0], -wp[1])
    out.append(VR.check("a3 winding pairs", "closure endpoints (1,0) and (-1,0)", {"p": list(wp), "q": list(wq), "pattern_ok": ok}, None))
    out.append(VR.check("a3 winding pattern", "opposite unit pairs, p = -q", ok, True))
    return out


def bundle_suite(grid=("-999/1000", "-99/100", "-9/10", "-1/2"), Ns=(10, 20, 40), mmax: int = 4) -> list[VR]:
    out = []
    for q in ("-1/2", "-3/5"):
        for N in Ns:
            worst = max(bundle.relation_residuals(q, N).values())
            out.append(VR.check(f"relation residual q={q} N={N}", "interior vectors n <= N-3", worst, 0.0, 1e-12))
    monos = [(0, m, m) for m in range(mmax + 1)] + [(1, 0, 0), (0, 1, 0), (-2, 1, 0)]
    reports = bundle.bundle_scan(monos, bundle.QGrid(grid), Ns)
    flags = [f for r in reports for f in r.flags]
    out.append(VR.check("bundle scan flags", "Haar jumps and norm monotonicity", len(flags), 0))
    worst = 0.0
    for r in reports:
        for m in range(mmax + 1):
            dev = abs(r.haar_values[(0, m, m)] - mpq(1, m + 1))
            worst = max(worst, float(dev) - 2 * (1 + m) * abs(1 + float(r.q)))
    out.append(VR.check("Haar continuity bound 2(1+m)|1+q|", "excess over the bound", max(worst, 0.0), 0.0, 0.0))
    return out
