import numpy as np
import pytest
from hypothesis import given

from sgnkit.graph import (
    GraphError,
    adjacency_matrix,
    connected_components,
    degree,
    new_graph,
    permute_nodes,
)
from strategies import graphs, graphs_with_perm


def test_new_graph_triangle(k3):
    assert k3.num_nodes == 3 and k3.num_links == 3
    assert k3.adjacency == ((1, 2), (0, 2), (0, 1))


def test_duplicate_edges_collapse():
    g = new_graph(3, [(0, 1), (0, 1), (1, 2)])
    assert g.num_links == 2
    assert new_graph(2, [(0, 1), (1, 0)]).num_links == 1


@pytest.mark.parametrize("n, edges", [(2, [(0, 0)]), (2, [(0, 2)]), (2, [(-1, 0)])])
def test_new_graph_rejects(n, edges):
    with pytest.raises(GraphError):
        new_graph(n, edges)


def test_degree(k3, star4):
    assert degree(k3, 0) == 2
    assert degree(star4, 0) == 3
    assert degree(star4, 1) == 1
    with pytest.raises(GraphError):
        degree(k3, 3)


def test_connected_components(k3):
    assert connected_components(k3) == [{0, 1, 2}]
    assert connected_components(new_graph(3, [])) == [{0}, {1}, {2}]
    g = new_graph(4, [(0, 1), (1, 2), (0, 2)])
    assert sorted(len(c) for c in connected_components(g)) == [1, 3]


def test_permute_nodes(k3, p3):
    assert permute_nodes(k3, [1, 2, 0]).adjacency == k3.adjacency
    assert permute_nodes(p3, [2, 1, 0]).edges() == p3.edges()
    assert permute_nodes(p3, [0, 1, 2]) == p3
    with pytest.raises(GraphError):
        permute_nodes(p3, [0, 0, 1])


def test_permute_carries_node_labels():
    g = new_graph(3, [(0, 1)], node_labels=[5, 6, 7])
    h = permute_nodes(g, [2, 0, 1])
    assert h.node_labels == (6, 7, 5)
    assert h.edges() == [(0, 2)]


def test_adjacency_matrix(k3, p3):
    assert np.array_equal(adjacency_matrix(k3), np.ones((3, 3)) - np.eye(3))
    assert not adjacency_matrix(new_graph(3, [])).any()
    expected = np.zeros((3, 3))
    expected[0, 1] = expected[1, 0] = expected[1, 2] = expected[2, 1] = 1
    assert np.array_equal(adjacency_matrix(p3), expected)


@given(graphs())
def test_graph_invariants(g):
    assert sum(g.degrees()) == 2 * g.num_links
    for i, nbrs in enumerate(g.adjacency):
        assert i not in nbrs
        assert list(nbrs) == sorted(set(nbrs))
        for j in nbrs:
            assert i in g.adjacency[j]
    a = adjacency_matrix(g)
    assert np.array_equal(a, a.T) and not np.diag(a).any()
    comps = connected_components(g)
    assert sum(len(c) for c in comps) == g.num_nodes
    assert set().union(*comps) == set(range(g.num_nodes)) if comps else g.num_nodes == 0


@given(graphs_with_perm())
def test_permute_preserves_sizes(gp):
    g, perm = gp
    h = permute_nodes(g, perm)
    assert h.num_nodes == g.num_nodes and h.num_links == g.num_links
    assert sorted(h.degrees()) == sorted(g.degrees())
