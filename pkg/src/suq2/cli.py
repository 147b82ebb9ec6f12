"""Command-line front end: ``suq2 <verb> [flags]``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from . import bundle, model, suites
from .algebra import Element, word
from .haar import HaarState, haar_monomial, invariance_residuals
from .hopf import closed_form_neg1, coproduct, delta_left, delta_right
from .report import Report, VerificationRecord as VR, render_structured, render_table
from .scalars import ParameterError, format_rational, qparam

VERBS = (
    "normalize",
    "mul",
    "star",
    "coproduct",
    "haar",
    "invariance",
    "eval",
    "fixedpoint",
    "spectrum",
    "ktheory",
    "bundle-scan",
    "verify-all",
)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="suq2", description="Verification kernel for C(SU_q(2)).")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--q", default="-1", help="deformation parameter as an exact rational, e.g. -1/2")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--element", help="element as JSON, or @path to a JSON file")
    p.add_argument("--element2", help="second factor for mul (JSON or @path)")
    p.add_argument("--word", help="element given as a word in the letters a A g G")
    p.add_argument("--word2", help="second factor for mul as a word")
    p.add_argument("--a", default=None, help="complex coordinate a for eval, e.g. 0.6+0.8j")
    p.add_argument("--c", default=None, help="complex coordinate c for eval")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--res", type=int, default=48, help="grid resolution for degree integrals")
    p.add_argument("--order", type=int, default=32, help="Haar quadrature order")
    p.add_argument("--grid", default="-999/1000,-99/100,-9/10,-1/2", help="comma separated q values")
    p.add_argument("--N", default="10,20,40", help="comma separated truncation sizes")
    p.add_argument("--phases", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="override numerical tolerances")
    p.add_argument("--check", default="all", help="ktheory check: all, a2, bott, a3, degree, phi-degree")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("table", "structured", "csv"), default=None)
    p.add_argument("--timing", action="store_true", help="include runtimes (reports are then not reproducible)")
    return p


def _load_json(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return json.loads(text)


def _element(args, q, which: int = 1) -> Element:
    el = args.element if which == 1 else args.element2
    wd = args.word if which == 1 else args.word2
    if el is not None:
        x = Element.from_dict(_load_json(el))
        if x.q != q:
            raise UsageError(f"element has q = {format_rational(x.q)} but --q is {format_rational(q)}")
        return x
    if wd is not None:
        bad = set(wd) - set("aAgG")
        if bad:
            raise UsageError(f"unknown letters in word: {''.join(sorted(bad))}")
        return word(q, wd)
    if which == 1 and args.k is not None:
        return Element.monomial(q, args.k, args.l or 0, args.m or 0)
    raise UsageError("no element given (use --element, --word or --k/--l/--m)")


def _tol(args, default):
    return default if args.tol is None else args.tol


def _complex(text, name) -> complex:
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot parse --{name}={text!r} as a complex number") from exc


def _ints(text: str) -> list[int]:
    try:
        vals = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma separated integers, got {text!r}") from exc
    if not vals:
        raise UsageError("empty integer list")
    return vals


def _need_neg1(q, verb):
    if q != -1:
        raise UsageError(f"{verb} is only defined at q = -1")


def run_verb(args, report: Report) -> None:
    q = qparam(args.q)
    verb = args.verb
    if verb == "normalize":
        x = _element(args, q)
        report.artifacts["result"] = x.to_dict()
        report.add(VR.check("normal form", "monomial basis", str(x)))
    elif verb == "mul":
        x, y = _element(args, q, 1), _element(args, q, 2)
        xy = x * y
        report.artifacts["result"] = xy.to_dict()
        report.add(VR.check("product", "normal form multiplication", str(xy)))
        report.add(VR.check("star(xy) = star(y) star(x)", "involution", xy.star() == y.star() * x.star(), True))
    elif verb == "star":
        x = _element(args, q)
        xs = x.star()
        report.artifacts["result"] = xs.to_dict()
        report.add(VR.check("star", "involution", str(xs)))
        report.add(VR.check("star(star(x)) = x", "involution", xs.star() == x, True))
    elif verb == "coproduct":
        x = _element(args, q)
        D = coproduct(x)
        report.artifacts["result"] = D.to_dict()
        report.add(VR.check("coproduct terms", "normal-form tensor", len(D)))
        report.add(VR.check("coassociativity", "(Delta x id) Delta = (id x Delta) Delta", delta_left(D) == delta_right(D), True))
        if q == -1 and len(x.terms) == 1:
            (mono,) = x.terms
            if mono.k >= 0:
                closed = closed_form_neg1(*mono).scale(x.coeff(mono))
                report.add(VR.check("binomial closed form", "q = -1 coproduct formula", D == closed, True))
    elif verb == "haar":
        if args.k is None and args.element is None and args.word is None:
            raise UsageError("haar needs --k/--l/--m or an element")
        x = _element(args, q)
        h = HaarState(q)
        val = h.element(x)
        if len(x.terms) == 1 and x.coeff(next(iter(x.terms))) == 1:
            mono = next(iter(x.terms))
            expected = mpq(1, mono.m + 1) if abs(q) == 1 and mono.k == 0 and mono.l == mono.m else None
            if expected is None:
                expected = haar_monomial(*mono, q)
            report.add(VR.check(f"h({mono})", "Haar state closed form", val, expected))
        else:
            report.add(VR.check("h(x)", "Haar state closed form", val))
        r1, r2 = invariance_residuals(x, h)
        report.add(VR.check("right invariance residual", "(id x h) Delta = h 1", str(r1), "0"))
        report.add(VR.check("left invariance residual", "(h x id) Delta = h 1", str(r2), "0"))
    elif verb == "invariance":
        if args.k is not None or args.element is not None or args.word is not None:
            x = _element(args, q)
            r1, r2 = invariance_residuals(x)
            report.add(VR.check("right invariance residual", "(id x h) Delta = h 1", str(r1), "0"))
            report.add(VR.check("left invariance residual", "(h x id) Delta = h 1", str(r2), "0"))
        else:
            report.extend(suites.haar_suite(q, args.degree))
    elif verb == "eval":
        _need_neg1(q, "eval")
        x = _element(args, q)
        p = model.SpherePoint(_complex(args.a, "a"), _complex(args.c, "c"))
        val = model.phi_eval(x, p.a, p.c)
        report.artifacts["point"] = [p.a, p.c]
        report.artifacts["phi"] = val
        report.add(VR.check("phi(x)(a,c)", "matrix model", val))
        if p.is_generic:
            diff = float(np.abs(val - model.rep_eval(x, p)).max())
            report.add(VR.check("closed form vs generator powers", "2x2 representation", diff, 0.0, _tol(args, 1e-12)))
        trace = model.haar_trace_state(x, args.order)
        hx = complex(HaarState(q).element(x))
        report.add(VR.check("h_-1(x) = (h_1 x tr) phi(x)", f"quadrature order {args.order}", abs(trace - hx), 0.0, _tol(args, 1e-8)))
    elif verb == "fixedpoint":
        _need_neg1(q, "fixedpoint")
        report.extend(suites.fixedpoint_suite(args.seed, degree=args.degree))
    elif verb == "spectrum":
        _need_neg1(q, "spectrum")
        report.extend(suites.spectrum_suite(args.seed))
    elif verb == "ktheory":
        checks = suites.KTHEORY_CHECKS if args.check == "all" else tuple(args.check.split(","))
        unknown = set(checks) - set(suites.KTHEORY_CHECKS)
        if unknown:
            raise UsageError(f"unknown ktheory check(s): {', '.join(sorted(unknown))}")
        report.extend(suites.ktheory_suite(checks, args.res))
    elif verb == "bundle-scan":
        grid = bundle.QGrid.parse(args.grid)
        Ns = _ints(args.N)
        if args.k is not None:
            monos = [(args.k, args.l or 0, args.m or 0)]
        else:
            monos = [(0, m, m) for m in range(args.degree + 1)]
        reports = bundle.bundle_scan(monos, grid, Ns, args.phases)
        report.artifacts["csv"] = bundle.reports_to_csv(reports, Ns)
        for rep in reports:
            report.add(
                VR.check(f"fiber q={format_rational(rep.q)}", "Haar jumps and norm monotonicity", "; ".join(rep.flags) or "ok", "ok")
            )
    elif verb == "verify-all":
        with report.timed():
            report.extend(suites.relations_suite(q))
        with report.timed():
            report.extend(suites.property_suite(q, args.degree, args.seed))
        with report.timed():
            report.extend(suites.coproduct_suite(q, args.degree, args.seed))
        with report.timed():
            report.extend(suites.haar_suite(q, args.degree))
        if q == -1:
            with report.timed():
                report.extend(suites.fixedpoint_suite(args.seed, degree=args.degree))
            with report.timed():
                report.extend(suites.spectrum_suite(args.seed))
            with report.timed():
                report.extend(suites.ktheory_suite(res=args.res))
        elif q < 0:
            with report.timed():
                report.extend(suites.bundle_suite(Ns=tuple(_ints(args.N))))


def _render(args, report: Report) -> str:
    fmt = args.format or ("csv" if args.verb == "bundle-scan" else "table")
    if fmt == "structured":
        return render_structured(report)
    if fmt == "csv":
        if "csv" in report.artifacts:
            return report.artifacts["csv"]
        lines = ["id,status,computed,expected,tolerance"]
        for r in report.records:
            lines.append(",".join(json.dumps(v) for v in (r.id, r.status, r.computed, r.expected, r.tolerance)))
        return "\n".join(lines) + "\n"
    text = render_table(report)
    if "result" in report.artifacts:
        text = json.dumps(report.artifacts["result"]) + "\n" + text
    return text


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(timing=args.timing)
    try:
        with report.timed():
            run_verb(args, report)
    except (UsageError, ParameterError, ValueError, TypeError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"suq2 {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    text = _render(args, report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
