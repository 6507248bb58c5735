import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crndep import randnet
from crndep.graph import (
    Digraph,
    GraphError,
    auxiliary_edges,
    auxiliary_incidence,
    graph_stats,
    incidence_matrices,
)
from crndep.ratlin import rank, same_image

from conftest import example_one, example_two


def test_single_edge_incidence():
    inc, src = incidence_matrices(Digraph(2, ((0, 1),)))
    assert inc.to_rows() == [[-1], [1]]
    assert src.to_rows() == [[1]]


def test_reversible_pair_incidence():
    inc, src = incidence_matrices(Digraph(2, ((0, 1), (1, 0))))
    assert inc.to_rows() == [[-1, 1], [1, -1]]
    assert src.to_rows() == [[1, 0], [0, 1]]


def test_example_two_incidence_columns():
    g = example_two().network.graph
    inc, _ = incidence_matrices(g)
    assert (inc.rows, inc.cols) == (5, 6)
    for col in inc.T.to_rows():
        assert sum(col) == 0
        assert sorted(x for x in col if x) == [-1, 1]


def test_example_two_stats():
    s = graph_stats(example_two().network.graph)
    assert (s.l, s.t, s.t_prime) == (1, 2, 1)


def test_example_one_stats():
    s = graph_stats(example_one().network.graph)
    assert (s.l, s.t, s.t_prime) == (1, 1, 0)


def test_cycle_stats():
    s = graph_stats(Digraph(3, ((0, 1), (1, 2), (2, 0))))
    assert (s.l, s.t, s.t_prime, s.weakly_reversible) == (1, 1, 1, True)


def test_invalid_graphs():
    with pytest.raises(GraphError):
        Digraph(2, ((0, 0),))
    with pytest.raises(GraphError):
        Digraph(2, ((0, 1), (0, 1)))
    with pytest.raises(GraphError):
        Digraph(2, ((0, 2),))


def test_auxiliary_pair():
    aux = auxiliary_incidence(Digraph(2, ((0, 1), (1, 0))))
    assert aux.to_rows() == [[-1], [1]]


@pytest.mark.parametrize("n", [3, 4])
def test_auxiliary_cycle_rank(n):
    g = Digraph(n, tuple((i, (i + 1) % n) for i in range(n)))
    aux = auxiliary_incidence(g)
    inc, _ = incidence_matrices(g)
    assert aux.cols == n - 1
    assert rank(aux) == n - 1 == rank(inc)
    assert same_image(aux, inc)


def test_auxiliary_requires_connected():
    with pytest.raises(GraphError):
        auxiliary_edges(Digraph(4, ((0, 1), (2, 3))))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_stats_against_networkx_condensation(seed):
    rng = np.random.default_rng(seed)
    g = randnet.random_network(rng, v_max=8).network.graph
    s = graph_stats(g)
    cond = nx.condensation(g.to_networkx())
    terminal = [c for c in cond.nodes if cond.out_degree(c) == 0]
    assert s.t == len(terminal)
    assert s.l == nx.number_weakly_connected_components(g.to_networkx())
    sinks = sum(1 for c in terminal if len(cond.nodes[c]["members"]) == 1
                and g.out_degree(next(iter(cond.nodes[c]["members"]))) == 0)
    assert s.t_prime == s.t - sinks
    inc, _ = incidence_matrices(g)
    assert inc.rows - rank(inc) == s.l
