from __future__ import annotations

import random
import sys

import pytest

from cellzeta.pipeline import reports_upto


@pytest.fixture(scope="session")
def reports():
    """Reduction reports for M0,5 .. M0,8 (a few seconds)."""
    return reports_upto(8)


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results, key=lambda k: (int(str(k).rstrip("s")), str(k))):
        terminalreporter.write_line(results[k])
