import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    entry = _ACCEPTANCE.setdefault(crit, {"ok": True, "details": []})
    entry["ok"] &= report.outcome == "passed"
    detail = dict(report.user_properties).get("detail")
    if detail:
        entry["details"].append(detail)


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("acceptance")
    if marker is not None and marker.args:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[crit]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {crit:>2}: {status}  {'; '.join(entry['details'])}")
