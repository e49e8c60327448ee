from __future__ import annotations

import sys

import pytest

TABLE_TRIPLES = [(2, 3, 7), (2, 3, 12), (2, 3, 8), (2, 7, 7), (3, 3, 10)]


@pytest.fixture(params=TABLE_TRIPLES, ids=lambda t: "-".join(map(str, t)))
def table_triple(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, what = results[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {what}")
