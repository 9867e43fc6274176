import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lbconsensus.harness import complete, cycle, fig1b, path_graph  # noqa: E402


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def fig():
    return fig1b()


@pytest.fixture
def p3():
    return path_graph(3)


# ---------------------------------------------------------------- acceptance summary

_criteria: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or rep.failed:
        prev = _criteria.get(number, (title, "PASS"))[1]
        verdict = "FAIL" if rep.failed or prev == "FAIL" else "PASS"
        _criteria[number] = (title, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {title}")
