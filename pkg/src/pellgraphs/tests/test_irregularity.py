import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellgraphs.graphs import (
    build_fibonacci_cube,
    build_pell_graph,
    complete_bipartite_graph,
    cycle_graph,
    path_graph,
)
from pellgraphs.irregularity import (
    ImbalanceHistogram,
    edge_imbalances,
    histogram,
    imbalance,
    irr,
    irr_subset,
    sigma,
)

from .utils import trees


def test_imbalance(pell2):
    # 11 has degree 3, 22 has degree 1
    assert imbalance(pell2, (3, 4)) == 2
    assert imbalance(pell2, (0, 1)) == 0

    with pytest.raises(ValueError, match=r"is not an edge"):
        imbalance(pell2, (0, 4))


def test_irr_sigma_small():
    assert irr(cycle_graph(5)) == 0
    assert irr(path_graph(3)) == 2
    # star K_{1,3}: three edges of imbalance 2
    assert irr(complete_bipartite_graph(1, 3)) == 6
    assert sigma(complete_bipartite_graph(1, 3)) == 12


@pytest.mark.parametrize(
    "n, expected_irr, expected_sigma", [(1, 0, 0), (2, 4, 6), (3, 18, 36), (4, 64, 134)]
)
def test_pell_irr_sigma(n, expected_irr, expected_sigma):
    graph = build_pell_graph(n)
    assert irr(graph) == expected_irr
    assert sigma(graph) == expected_sigma


def test_irr_subset(pell2):
    assert irr_subset(pell2, [(3, 4), (1, 3)]) == 3
    assert irr_subset(pell2, []) == 0
    assert irr_subset(pell2, pell2.edges()) == irr(pell2)

    with pytest.raises(ValueError, match=r"\(0, 4\) is not an edge"):
        irr_subset(pell2, [(0, 4)])


def test_histogram(pell3):
    hist = histogram(pell3)

    assert hist.padded(5) == (7, 6, 3, 2, 0)
    assert hist[4] == 0
    assert hist.n_edges == 18
    assert hist.max_imbalance == 3
    assert hist.irr() == irr(pell3)
    assert hist.sigma() == sigma(pell3)
    assert hist.to_json() == {"0": 7, "1": 6, "2": 3, "3": 2}
    assert list(hist.rows(3)) == [(3, 0, 7), (3, 1, 6), (3, 2, 3), (3, 3, 2)]


def test_histogram_padded_error():
    with pytest.raises(ValueError, match=r"beyond size 2"):
        ImbalanceHistogram({0: 1, 3: 2}).padded(2)


def test_histogram_empty():
    hist = histogram(build_pell_graph(0))
    assert hist.n_edges == 0
    assert hist.max_imbalance == 0
    assert hist.padded(5) == (0, 0, 0, 0, 0)


@settings(max_examples=50)
@given(trees())
def test_tree_invariants(tree):
    imb = edge_imbalances(tree)
    hist = histogram(tree)

    assert hist.n_edges == tree.n_vertices - 1
    assert irr(tree) == int(imb.sum()) == hist.irr()
    assert sigma(tree) >= irr(tree)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_invariant_under_relabeling(data):
    graph = data.draw(
        st.one_of(
            st.integers(0, 6).map(build_pell_graph),
            st.integers(0, 7).map(build_fibonacci_cube),
            trees(max_vertices=12),
        )
    )
    permutation = data.draw(st.permutations(range(graph.n_vertices)))
    shuffled = graph.relabel(permutation)

    assert irr(shuffled) == irr(graph)
    assert sigma(shuffled) == sigma(graph)
    assert histogram(shuffled) == histogram(graph)
