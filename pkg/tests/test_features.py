from math import isclose, sqrt

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from oracles import brute_betweenness_avg, brute_closeness_avg, dense_dominant
from sgnkit.features import (
    FEATURE_NAMES,
    ConvergenceError,
    FeatureConfig,
    FeatureVector,
    avg_betweenness,
    avg_closeness,
    avg_clustering,
    avg_eigenvector,
    avg_neighbor_degree,
    dominant_eigenpair,
    extract_features,
    largest_eigenvalue,
    pct_leaf,
)
from sgnkit.graph import new_graph, permute_nodes
from sgnkit.sgn import SgnConfig, line_graph, sgn
from strategies import graphs, graphs_with_perm

POWER = FeatureConfig(eigen_dense_threshold=0)


def test_pct_leaf(star4, k3, p3):
    assert pct_leaf(star4) == 0.75
    assert pct_leaf(k3) == 0
    assert isclose(pct_leaf(p3), 2 / 3)


def test_avg_clustering(k3, star4):
    assert avg_clustering(k3) == 1.0
    assert avg_clustering(star4) == 0.0
    pendant = new_graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    assert isclose(avg_clustering(pendant), (1 / 3 + 1 + 1 + 0) / 4)
    assert isclose(avg_clustering(pendant), 0.5833, abs_tol=1e-4)


@pytest.mark.parametrize("cfg", [FeatureConfig(), POWER])
def test_largest_eigenvalue(cfg, k3, p3):
    assert isclose(largest_eigenvalue(k3, cfg), 2.0, abs_tol=1e-9)
    assert isclose(largest_eigenvalue(p3, cfg), sqrt(2), abs_tol=1e-9)
    assert largest_eigenvalue(new_graph(3, []), cfg) == 0.0


def test_avg_betweenness(p3, k3, star4):
    assert isclose(avg_betweenness(p3), 1 / 3)
    assert avg_betweenness(k3) == 0.0
    assert isclose(avg_betweenness(star4), 0.75)


def test_avg_closeness(p3, k3):
    assert isclose(avg_closeness(p3), 7 / 9)
    assert isclose(avg_closeness(k3), 1.0)
    assert isclose(avg_closeness(new_graph(4, [(0, 1), (2, 3)])), 1 / 3)


@pytest.mark.parametrize("cfg", [FeatureConfig(), POWER])
def test_avg_eigenvector(cfg, k3, k4):
    assert isclose(avg_eigenvector(k3, cfg), 1 / sqrt(3), abs_tol=1e-9)
    assert isclose(avg_eigenvector(k4, cfg), 0.5, abs_tol=1e-9)
    assert avg_eigenvector(new_graph(3, []), cfg) == 0.0


def test_avg_neighbor_degree(k3, star4, p3):
    assert avg_neighbor_degree(k3) == 2.0
    assert avg_neighbor_degree(star4) == 2.5
    assert isclose(avg_neighbor_degree(p3), 5 / 3)


def test_extract_triangle(k3):
    got = extract_features(k3).as_array()
    want = [3, 3, 2, 0, 1, 2, 1, 0, 1, 1 / sqrt(3), 2]
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_extract_star(star4):
    got = extract_features(star4).as_array()
    # closeness 1, 3/5, 3/5, 3/5; Perron vector (sqrt3, 1, 1, 1)/sqrt6
    want = [4, 3, 1.5, 0.75, 0, sqrt(3), 0.5, 0.75, 0.7, (sqrt(3) + 3) / (4 * sqrt(6)), 2.5]
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_extract_empty_sgn(p3):
    assert not extract_features(sgn(p3, SgnConfig(2))).as_array().any()
    assert not extract_features(line_graph(new_graph(2, []))).as_array().any()
    assert FeatureVector.zeros().as_array().shape == (len(FEATURE_NAMES),)


def test_power_iteration_can_fail():
    g = new_graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)])
    with pytest.raises(ConvergenceError):
        dominant_eigenpair(g, FeatureConfig(eigen_dense_threshold=0, power_iter_max=2))


def test_bad_feature_config():
    with pytest.raises(ValueError):
        FeatureConfig(power_iter_tol=0)
    with pytest.raises(ValueError):
        FeatureConfig(power_iter_max=0)


def test_disconnected_equal_components_dense_matches_power():
    g = new_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    lam_d, x_d = dominant_eigenpair(g)
    lam_p, x_p = dominant_eigenpair(g, POWER)
    assert isclose(lam_d, lam_p, abs_tol=1e-9)
    np.testing.assert_allclose(x_d, x_p, atol=1e-8)


@settings(max_examples=80)
@given(graphs(max_nodes=10))
def test_centralities_match_oracles(g):
    edges = g.edges()
    assert isclose(avg_betweenness(g), brute_betweenness_avg(g.num_nodes, edges), abs_tol=1e-9)
    assert isclose(avg_closeness(g), brute_closeness_avg(g.num_nodes, edges), abs_tol=1e-9)


@settings(max_examples=80)
@given(graphs(min_nodes=1, max_nodes=10))
def test_spectral_match_oracle(g):
    lam, mean = dense_dominant(g.num_nodes, g.edges())
    for cfg in (FeatureConfig(), POWER):
        assert isclose(largest_eigenvalue(g, cfg), lam, abs_tol=1e-6)
        assert isclose(avg_eigenvector(g, cfg), mean, abs_tol=1e-6)


@given(graphs(min_nodes=1, max_nodes=10))
def test_feature_ranges(g):
    f = extract_features(g)
    arr = f.as_array()
    assert np.all(np.isfinite(arr))
    for v in (f.pct_leaf, f.avg_clustering, f.density):
        assert 0 <= v <= 1
    assert f.avg_betweenness >= 0
    if g.num_links:
        n = g.num_nodes
        assert -1e-9 <= f.largest_eigenvalue <= n - 1 + 1e-9
        assert f.avg_degree == 2 * g.num_links / n
        assert f.density == 2 * g.num_links / (n * (n - 1))


@settings(max_examples=60)
@given(graphs_with_perm(max_nodes=10))
def test_permutation_invariance(gp):
    g, perm = gp
    a = extract_features(g).as_array()
    b = extract_features(permute_nodes(g, perm)).as_array()
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)


@settings(max_examples=40)
@given(graphs(min_nodes=2, max_nodes=10))
def test_agrees_with_networkx(g):
    # third-party cross-check on connected graphs, where conventions coincide
    h = nx.Graph()
    h.add_nodes_from(range(g.num_nodes))
    h.add_edges_from(g.edges())
    if not nx.is_connected(h):
        return
    n = g.num_nodes
    bc = nx.betweenness_centrality(h, normalized=False)
    assert isclose(avg_betweenness(g), sum(bc.values()) / n, abs_tol=1e-9)
    cc = nx.closeness_centrality(h)
    assert isclose(avg_closeness(g), sum(cc.values()) / n, abs_tol=1e-9)
    assert isclose(avg_clustering(g), nx.average_clustering(h), abs_tol=1e-9)
    nd = nx.average_neighbor_degree(h)
    assert isclose(avg_neighbor_degree(g), sum(nd.values()) / n, abs_tol=1e-9)
