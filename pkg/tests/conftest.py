import pytest

from smoothmoduli import normalize_branch, tree_from_spec


def chain(*ns):
    spec = {"n": ns[-1], "children": []}
    for n in reversed(ns[:-1]):
        spec = {"n": n, "children": [spec]}
    return tree_from_spec(spec)


def star(root_n, *leaf_ns):
    return tree_from_spec({"n": root_n, "children": [{"n": n, "children": []} for n in leaf_ns]})


def single(n):
    return tree_from_spec({"n": n, "children": []})


@pytest.fixture
def chain424():
    return chain(4, 2, 4)


@pytest.fixture
def chain35():
    return chain(3, 5)


@pytest.fixture
def tangent_pairs_branches():
    # x(x+y^2)y(y+x^2) = 0
    return [
        normalize_branch("x_of_y", ["0", "0"]),
        normalize_branch("x_of_y", ["0", "-1"]),
        normalize_branch("y_of_x", ["0", "0"]),
        normalize_branch("y_of_x", ["0", "-1"]),
    ]


@pytest.fixture
def tangent_pairs_tree():
    return star(0, 2, 2)


# one summary line per acceptance criterion, printed after the run
_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA[number] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        verdict, title = _CRITERIA[number]
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")
