"""Collects outcomes of tests marked ``criterion`` and prints one verdict line per criterion."""

from collections import OrderedDict

import pytest

_verdicts: "OrderedDict[str, dict]" = OrderedDict()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    cid, title = mark.args
    entry = _verdicts.setdefault(str(cid), {"title": title, "passed": 0, "failed": []})
    if report.passed and report.when == "call":
        entry["passed"] += 1
    elif report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, v in _verdicts.items():
        verdict = "FAIL" if v["failed"] else "PASS"
        line = f"[{verdict}] criterion {cid}: {v['title']}"
        if v["failed"]:
            line += f"  (failing: {', '.join(v['failed'])})"
        tr.write_line(line)
