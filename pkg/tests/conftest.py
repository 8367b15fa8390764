from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from teashare.dynamics import SharingMove, Weights
from teashare.graph import Graph, enumerate_connected_subsets

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def tree_graph():
    return Graph(["r", "s", "t", "u", "v"], [("r", "s"), ("s", "t"), ("t", "v"), ("t", "u")])


@pytest.fixture
def tree():
    return tree_graph()


@pytest.fixture
def tree_weights(tree):
    return Weights.from_mapping(tree, {"r": 300, "s": 0, "t": 144, "u": 72, "v": 72})


rationals = st.fractions(min_value=0, max_value=20, max_denominator=12)
signed_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def connected_graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    names = [f"v{i}" for i in range(n)]
    edges = {(names[draw(st.integers(0, i - 1))], names[i]) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()) and draw(st.booleans()):
                edges.add((names[i], names[j]))
    return Graph(names, sorted(edges))


@st.composite
def graphs_with_weights(draw, min_n=1, max_n=7):
    g = draw(connected_graphs(min_n, max_n))
    w = Weights(g, draw(st.lists(rationals, min_size=len(g), max_size=len(g))))
    return g, w


@st.composite
def moves(draw, g):
    sets = list(enumerate_connected_subsets(g, len(g)))
    return SharingMove(draw(st.sampled_from(sets)))


@st.composite
def move_sequences(draw, g, max_len=6):
    k = draw(st.integers(0, max_len))
    return [draw(moves(g)) for _ in range(k)]
