"""Shared fixtures plus the acceptance-criteria summary.

Tests named test_a1 .. test_a10 in test_acceptance.py are tracked per
criterion; after the run a summary section prints one PASS/FAIL line per
criterion so the gate can be read off the bottom of the pytest output.
"""

import re

import pytest

CRITERIA = {
    "A1": "name extraction table",
    "A2": "gradient check",
    "A3": "desk-scale detector accuracy",
    "A4": "learned vs random embeddings",
    "A5": "metric counting oracle",
    "A6": "threshold monotonicity",
    "A7": "pipeline determinism",
    "A8": "embedding semantics and coverage",
    "A9": "mutation statistics",
    "A10": "scan latency",
}

_ORDER = [f"A{i}" for i in range(1, 11)]
_RESULTS = {}
_DETAILS = {}

_NODE_RE = re.compile(r"test_acceptance\.py::test_(a\d+)")


def record_detail(criterion, text):
    _DETAILS.setdefault(criterion, []).append(text)


@pytest.fixture
def acceptance():
    """Callable for acceptance tests to attach a measured-values note."""
    return record_detail


def pytest_runtest_logreport(report):
    m = _NODE_RE.search(report.nodeid)
    if m is None:
        return
    criterion = m.group(1).upper()
    if report.when == "call" or (report.when == "setup"
                                 and report.outcome != "passed"):
        _RESULTS.setdefault(criterion, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    del exitstatus, config
    seen = [c for c in _ORDER if c in _RESULTS]
    if not seen:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in _ORDER:
        outcomes = _RESULTS.get(criterion)
        if not outcomes:
            terminalreporter.write_line(
                f"{criterion} {CRITERIA[criterion]}: NOT RUN", yellow=True)
            continue
        ok = all(o == "passed" for o in outcomes)
        line = f"{criterion} {CRITERIA[criterion]}: {'PASS' if ok else 'FAIL'}"
        detail = "; ".join(_DETAILS.get(criterion, []))
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line, green=ok, red=not ok)
