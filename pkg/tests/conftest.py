import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    item_marker = getattr(report, "criterion", None)
    if item_marker is None:
        return
    number, title = item_marker
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(number)
        outcome = "FAIL" if report.outcome != "passed" else "PASS"
        if prev and prev[0] == "FAIL":
            outcome = "FAIL"
        _results[number] = (outcome, title, report.duration + (prev[2] if prev else 0.0))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        outcome, title, seconds = _results[number]
        terminalreporter.write_line(f"AC{number:02d} {outcome}  {title}  ({seconds:.2f}s)")
    passed = sum(r[0] == "PASS" for r in _results.values())
    terminalreporter.write_line(f"{passed}/{len(_results)} acceptance criteria passed")
