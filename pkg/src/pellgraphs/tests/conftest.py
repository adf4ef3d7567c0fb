import pytest

from pellgraphs.graphs import Graph, build_pell_graph, cycle_graph
from pellgraphs.xr_accessor import TablesAccessor  # noqa: F401


@pytest.fixture
def pell2() -> Graph:
    # 00 01 10 11 22
    return build_pell_graph(2)


@pytest.fixture
def pell3() -> Graph:
    return build_pell_graph(3)


@pytest.fixture
def square() -> Graph:
    return cycle_graph(4)


@pytest.fixture
def domino() -> Graph:
    # two squares sharing the edge 1-4
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 3), (3, 4), (1, 4), (2, 5), (4, 5)])

