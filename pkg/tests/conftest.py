from fractions import Fraction

import pytest

from aft.instances import corpus, example1, example2, example2_abt, tiny_corpus
from aft.network import AbstractNetwork, Element


def make_net(paths, capacity=1, transit=1, **overrides):
    """Network over the elements used in ``paths``; ``overrides`` maps id -> (capacity, transit)."""
    ids = sorted({x for p in paths for x in p} | set(overrides))
    elements = []
    for x in ids:
        c, t = overrides.get(x, (capacity, transit))
        elements.append(Element(x, Fraction(c), t))
    return AbstractNetwork(elements, paths)


@pytest.fixture
def ex1():
    return example1().network()


@pytest.fixture
def ex2():
    return example2().network()


@pytest.fixture
def ex2_abt():
    return example2_abt().network()


@pytest.fixture
def single():
    """One path (e1,e2) with unit capacities and transit times."""
    return make_net([("e1", "e2")])


@pytest.fixture(scope="session")
def corpus_entries():
    return corpus()


@pytest.fixture(scope="session")
def tiny_entries():
    return tiny_corpus()


# -- acceptance summary ----------------------------------------------------------

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        label, title = marker.args
        _CRITERIA.append((label, title, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, title, outcome in sorted(_CRITERIA, key=lambda c: (len(c[0].rstrip("abc")), c[0])):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {label:>3}  {title}")
