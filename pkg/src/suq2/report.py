"""Verification records and their table / JSON renderings."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from typing import Any

from gmpy2 import mpq

from .scalars import GaussianRational, format_rational

__all__ = ["VerificationRecord", "Report", "jsonable", "render_table", "render_structured"]


def jsonable(value: Any) -> Any:
    """Convert exact scalars, numpy values and containers to JSON-friendly values."""
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if type(value) is mpq:
        return format_rational(value)
    if isinstance(value, GaussianRational):
        return str(value)
    if isinstance(value, complex):
        return [float(value.real), float(value.imag)]
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if hasattr(value, "tolist"):
        return jsonable(value.tolist())
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


@dataclass
class VerificationRecord:
    """One check.  ``tolerance=None`` means exact equality; ``expected=None`` an informational result."""

    id: str
    anchor: str
    expected: Any
    computed: Any
    tolerance: float | None
    status: str
    runtime_ms: int | None = None

    @classmethod
    def check(cls, id: str, anchor: str, computed, expected=None, tolerance=None) -> "VerificationRecord":
        if expected is None:
            ok = True
        elif tolerance is None:
            ok = computed == expected
        else:
            ok = abs(computed - expected) <= tolerance
        return cls(id, anchor, jsonable(expected), jsonable(computed), tolerance, "pass" if ok else "fail")

    @classmethod
    def failure(cls, id: str, anchor: str, message: str) -> "VerificationRecord":
        return cls(id, anchor, None, message, None, "fail")

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class Report:
    def __init__(self, timing: bool = False):
        self.records: list[VerificationRecord] = []
        self.timing = timing
        self.artifacts: dict[str, Any] = {}

    def add(self, record: VerificationRecord) -> VerificationRecord:
        self.records.append(record)
        return record

    def extend(self, records):
        for r in records:
            self.add(r)

    @contextmanager
    def timed(self):
        """Attach the elapsed time to records added inside the block (only with timing on)."""
        start = time.perf_counter()
        n0 = len(self.records)
        yield
        if self.timing:
            ms = int(round(1000 * (time.perf_counter() - start)))
            for r in self.records[n0:]:
                r.runtime_ms = ms

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


def _short(value, width=60) -> str:
    text = value if isinstance(value, str) else json.dumps(value)
    return text if len(text) <= width else text[: width - 3] + "..."


def render_table(report: Report) -> str:
    lines = []
    for r in report.records:
        tol = "exact" if r.tolerance is None else f"{r.tolerance:g}"
        line = f"{r.status.upper():4}  {r.id}  computed={_short(r.computed)}"
        if r.expected is not None:
            line += f"  expected={_short(r.expected)}  tol={tol}"
        if r.runtime_ms is not None:
            line += f"  {r.runtime_ms}ms"
        line += f"  [{r.anchor}]"
        lines.append(line)
    n_pass = sum(r.passed for r in report.records)
    lines.append(f"{n_pass}/{len(report.records)} checks passed")
    return "\n".join(lines) + "\n"


def render_structured(report: Report) -> str:
    records = []
    for r in report.records:
        d = asdict(r)
        if d["runtime_ms"] is None:
            del d["runtime_ms"]
        records.append(d)
    out = {"passed": report.passed, "records": records}
    if report.artifacts:
        out["artifacts"] = jsonable(report.artifacts)
    return json.dumps(out, indent=2, sort_keys=False) + "\n"
