import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from plsphere.complex import build_from_maximal_cells
from plsphere.errors import BadDimension, VertexNotInComplex
from plsphere.fixtures import simplex_boundary, torus7
from plsphere.metrics import distance_field, k_cell_distance

from conftest import random_connected_complex, random_corpus


def cell_graph_distance(K, k, x, y):
    """Independent oracle: shortest path in the graph of k-cells plus two
    terminal nodes, minus the terminals, counted in cells."""
    if x == y:
        return 0
    G = nx.Graph()
    for f in K.cells(k - 1):
        cob = sorted(K.coboundary[f])
        G.add_edges_from((a, b) for a in cob for b in cob if a < b)
    G.add_nodes_from(K.cells(k))
    for c in K.cells(k):
        if x in c:
            G.add_edge("src", c)
        if y in c:
            G.add_edge(c, "dst")
    try:
        return nx.shortest_path_length(G, "src", "dst") - 1
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        return math.inf


def test_one_cell_distance_matches_graph_bfs():
    for K in random_corpus(2, 20, seed=1):
        G = nx.Graph(list(K.cells(1)))
        v0 = K.vertices[0]
        oracle = nx.single_source_shortest_path_length(G, v0)
        field = distance_field(K, 1, v0)
        assert field.dist == {v: oracle.get(v, math.inf) for v in K.vertices}


@pytest.mark.parametrize("k", [2, 3])
def test_k_cell_distance_matches_cell_graph_oracle(k):
    for K in random_corpus(3, 10, seed=k):
        vs = K.vertices[:8]
        for x in vs:
            for y in vs:
                assert k_cell_distance(K, k, x, y) == cell_graph_distance(K, k, x, y)


def test_distance_field_equals_pairwise_calls():
    for K in random_corpus(2, 10, seed=5):
        for k in (1, 2):
            o = K.vertices[-1]
            f = distance_field(K, k, o)
            assert all(f[v] == k_cell_distance(K, k, o, v) for v in K.vertices)


def test_examples_on_small_spheres():
    K = simplex_boundary(2)
    assert k_cell_distance(K, 2, 0, 0) == 0
    assert k_cell_distance(K, 2, 0, 1) == 1
    assert k_cell_distance(simplex_boundary(3), 3, 0, 4) == 1
    f = distance_field(torus7(), 1, 0)
    assert max(f.dist.values()) == 1  # the 7-vertex torus is a complete graph


def test_unreachable_is_infinite():
    K = build_from_maximal_cells([(0, 1, 2), (2, 3, 4)])
    assert k_cell_distance(K, 2, 0, 3) == math.inf
    assert k_cell_distance(K, 1, 0, 3) == 2
    assert distance_field(K, 2, 0).max_finite() == 1


def test_two_cell_distance_on_hexagon_fan():
    # a hexagon coned from its centre 6: both rims are one triangle from the
    # centre, but reaching the opposite rim vertex takes three triangles
    K = build_from_maximal_cells([(i, (i + 1) % 6, 6) for i in range(6)])
    assert k_cell_distance(K, 2, 0, 6) == 1
    assert k_cell_distance(K, 2, 6, 3) == 1
    assert k_cell_distance(K, 2, 0, 3) == 3


def test_errors():
    K = simplex_boundary(2)
    with pytest.raises(BadDimension):
        k_cell_distance(K, 3, 0, 1)
    with pytest.raises(BadDimension):
        distance_field(K, 0, 0)
    with pytest.raises(VertexNotInComplex):
        k_cell_distance(K, 1, 0, 42)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(1, 2))
def test_symmetry(rnd, k):
    K = random_connected_complex(rnd, 2, 15)
    x, y = rnd.choice(K.vertices), rnd.choice(K.vertices)
    assert k_cell_distance(K, k, x, y) == k_cell_distance(K, k, y, x)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_graph_distance_changes_by_at_most_one_along_edges(rnd):
    K = random_connected_complex(rnd, 2, 20)
    f = distance_field(K, 1, rnd.choice(K.vertices))
    for a, b in K.cells(1):
        assert abs(f[a] - f[b]) <= 1
