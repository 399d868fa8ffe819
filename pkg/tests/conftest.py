import random

import pytest
from hypothesis import strategies as st

from eulermag.graph import from_edge_list, butterfly_graph, path_metric


@pytest.fixture
def bfly():
    return butterfly_graph()


@pytest.fixture
def bfly_dm(bfly):
    return path_metric(bfly)


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return from_edge_list(n, [p for p, k in zip(pairs, keep) if k])


def random_graph(rng: random.Random, n: int, p: float = 0.5):
    return from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_connected_graph(rng: random.Random, n: int, p: float = 0.4):
    """Random spanning tree plus independent extra edges."""
    verts = list(range(n))
    rng.shuffle(verts)
    edges = {tuple(sorted((verts[i], verts[rng.randrange(i)]))) for i in range(1, n)}
    edges |= {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    return from_edge_list(n, sorted(edges))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
