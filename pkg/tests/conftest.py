"""Collects outcomes of tests marked ``criterion`` and prints one line per criterion."""

from collections import OrderedDict

_CRITERIA: "OrderedDict[int, str]" = OrderedDict()
_NODE_CRITERION: dict[str, int] = {}
_FAILED: set[int] = set()
_RAN: set[int] = set()


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number, title = mark.args
        _CRITERIA.setdefault(number, title)
        _NODE_CRITERION[item.nodeid] = number
    for key in sorted(_CRITERIA):
        _CRITERIA.move_to_end(key)


def pytest_runtest_logreport(report):
    number = _NODE_CRITERION.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.failed:
        _RAN.add(number)
    if report.failed:
        _FAILED.add(number)


def pytest_terminal_summary(terminalreporter):
    if not _RAN:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in _CRITERIA.items():
        if number not in _RAN:
            status = "SKIP"
        else:
            status = "FAIL" if number in _FAILED else "PASS"
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
