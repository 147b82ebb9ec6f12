import random
import time

import numpy as np
import pytest

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    n = marker.args[0]
    _CRITERIA.setdefault(n, []).append((item.name, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        rows = _CRITERIA[n]
        ok = all(outcome == "passed" for _, outcome, _ in rows)
        secs = sum(d for _, _, d in rows)
        failed = [name for name, outcome, _ in rows if outcome != "passed"]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  ({len(rows)} checks, {secs:.2f} s)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def nprng():
    return np.random.default_rng(0)


@pytest.fixture
def stopwatch():
    """Yields a callable returning seconds since the fixture was created."""
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
