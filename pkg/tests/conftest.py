import sys

import pytest

from knotdimer import build_diagram, get_fixture, load_catalog

TREFOIL = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)"


def knot_entries():
    return [e for e in load_catalog() if not e.is_matrix]


def small_entries(k=8):
    return [e for e in knot_entries() if len(e.pd) <= k]


@pytest.fixture
def fig8():
    return get_fixture("4_1").diagram()


@pytest.fixture
def trefoil():
    return get_fixture("3_1").diagram()


def diagram(name, outer=None):
    return build_diagram(get_fixture(name).pd, unbounded=outer)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
