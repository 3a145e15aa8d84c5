import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _results.setdefault(number, {"title": title, "ok": True, "notes": []})
    if report.failed:
        entry["ok"] = False
    for name, value in report.user_properties:
        if name == "note":
            entry["notes"].append(value)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None and (report.when == "call" or report.failed):
        report._criterion = (m.args[0], m.args[1])


@pytest.fixture
def note(record_property):
    """Attach a one-line note to the criterion summary."""

    def add(text: str) -> None:
        record_property("note", text)

    return add


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        e = _results[number]
        status = "PASS" if e["ok"] else "FAIL"
        line = f"criterion {number:2d}: {status}  {e['title']}"
        if e["notes"]:
            line += "  [" + "; ".join(e["notes"]) + "]"
        terminalreporter.write_line(line)
