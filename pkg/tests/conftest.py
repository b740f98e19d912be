"""Print one PASS/FAIL line per acceptance criterion after the run."""

import re

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    detail = dict(report.user_properties).get("criterion", "")
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(k)
        failed = report.failed or (prev is not None and prev[0] == "FAIL")
        _CRITERIA[k] = ("FAIL" if failed else "PASS", detail or (prev[1] if prev else ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        status, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {detail}")
