from collections import defaultdict

import pytest

from helpers import FIXTURES, presheaf


@pytest.fixture(params=FIXTURES)
def any_presheaf(request):
    return presheaf(request.param)


@pytest.fixture
def mo2():
    return presheaf("mo:2")


# -- acceptance summary: one line per criterion ------------------------------------

_criteria = {}
_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            number, title = mark.args
            _criteria[number] = title
            item.user_properties.append(("criterion", number))


def pytest_runtest_logreport(report):
    for key, value in report.user_properties:
        if key == "criterion" and (report.when == "call" or report.outcome != "passed"):
            _outcomes[value].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcomes.get(number, [])
        ok = bool(results) and all(r == "passed" for r in results)
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {_criteria[number]}")
