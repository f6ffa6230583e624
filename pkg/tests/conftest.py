"""Collects outcomes of tests marked ``@pytest.mark.criterion(n, title)`` and
prints one PASS/FAIL/SKIP line per acceptance criterion after the run."""
import pytest

_results: dict[int, dict] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    entry = _results.setdefault(n, {"title": title, "outcomes": []})
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        if call.excinfo is None:
            entry["outcomes"].append("passed")
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            entry["outcomes"].append("skipped")
        else:
            entry["outcomes"].append("failed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        outcomes = _results[n]["outcomes"]
        if "failed" in outcomes:
            status = "FAIL"
        elif outcomes and all(o == "skipped" for o in outcomes):
            status = "SKIP"
        elif outcomes:
            status = "PASS"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"criterion {n:>2} [{status}] {_results[n]['title']}")
