import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from kcramsey.densities import PairParams
from kcramsey.graph import Graph
from kcramsey.solver import find_crit

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for v in range(n) for u in range(v)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def permutations(draw, n):
    return draw(st.permutations(list(range(n))))


@pytest.fixture(scope="session")
def pp44():
    return PairParams(4, 4)


@pytest.fixture(scope="session")
def hstar(pp44):
    """Critical sub-hypergraph of the (K4, C4) hypergraph of K10 (about 20 s)."""
    return find_crit(Graph.complete(10), pp44)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
