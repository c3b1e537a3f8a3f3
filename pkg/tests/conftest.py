import time
from collections import defaultdict

import pytest
from hypothesis import strategies as st

from ivsugeno.intervals import AdmissibleOrder, make_interval

ORDERS = [
    AdmissibleOrder.xu_yager(),
    AdmissibleOrder.lex1(),
    AdmissibleOrder.lex2(),
    AdmissibleOrder.alpha_beta(0.3, 0.8),
    AdmissibleOrder.alpha_beta(0.7, 0.2),
    AdmissibleOrder.alpha_plus(0.25),
    AdmissibleOrder.alpha_minus(0.6),
]

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
grid = st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0])


@st.composite
def intervals(draw, values=unit):
    a, b = draw(values), draw(values)
    return make_interval(min(a, b), max(a, b))


def interval_vectors(n_min=1, n_max=4, values=unit):
    return st.lists(intervals(values), min_size=n_min, max_size=n_max)


orders = st.sampled_from(ORDERS)


# -- acceptance summary ------------------------------------------------------

_results = defaultdict(list)
_titles = {}
_notes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): test belongs to an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = mark.args
    _titles[number] = title
    _results[number].append((item.name, report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        runs = _results[number]
        ok = all(passed for _, passed, _ in runs)
        secs = sum(d for _, _, d in runs)
        failed = [name for name, passed, _ in runs if not passed]
        line = f"ACCEPTANCE {number}. {_titles[number]}: {'PASS' if ok else 'FAIL'} ({len(runs)} checks, {secs:.2f}s)"
        if failed:
            line += " failed: " + ", ".join(failed)
        terminalreporter.write_line(line)
        for text in _notes[number]:
            terminalreporter.write_line(f"    {text}")


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start


@pytest.fixture
def note(request):
    """Attach a line of evidence to the acceptance summary of the current test."""
    mark = request.node.get_closest_marker("acceptance")
    return lambda text: _notes[mark.args[0] if mark else None].append(text)
