from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, relabelled, to_nx
from satgame.errors import GraphError
from satgame.graph import (
    Graph,
    canonical_key,
    component_masks,
    component_of,
    format_graph,
    is_acyclic,
    longest_path_vertices,
    max_degree,
    parse_graph,
)


def test_basic_constructors():
    assert Graph.path(4).edges() == [(0, 1), (1, 2), (2, 3)]
    assert Graph.cycle(3).num_edges == 3
    assert Graph.complete(4).num_edges == 6
    assert Graph.star(3).degrees() == [3, 1, 1, 1]
    assert sorted(Graph.double_star(2, 3).degrees(), reverse=True)[:2] == [4, 3]
    assert Graph.path(3, n=5).n == 5


def test_add_edge_rejects_bad_edges():
    g = Graph.path(3)
    with pytest.raises(GraphError):
        g.add_edge(0, 0)
    with pytest.raises(GraphError):
        g.add_edge(0, 1)
    with pytest.raises(GraphError):
        g.add_edge(0, 7)


def test_graph_is_immutable_value():
    g = Graph.empty(3)
    h = g.add_edge(0, 1)
    assert g.num_edges == 0 and h.num_edges == 1
    assert h == Graph.from_edges(3, [(1, 0)])
    assert hash(h) == hash(Graph.from_edges(3, [(0, 1)]))


@given(relabelled())
def test_canonical_key_ignores_labels(pair):
    g, h = pair
    assert canonical_key(g) == canonical_key(h)


@settings(max_examples=150)
@given(graphs(max_n=6), graphs(max_n=6))
def test_canonical_key_separates_non_isomorphic(g, h):
    same = g.n == h.n and nx.is_isomorphic(to_nx(g), to_nx(h))
    assert (canonical_key(g) == canonical_key(h)) == same


def test_canonical_key_on_all_graphs_of_order_5():
    # 34 isomorphism classes of graphs on 5 vertices
    pairs = list(itertools.combinations(range(5), 2))
    keys = set()
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        keys.add(canonical_key(Graph.from_edges(5, edges)))
    assert len(keys) == 34


def test_coloured_keys_respect_colours():
    g = Graph.path(3)
    assert canonical_key(g, (1, 0, 0)) == canonical_key(g, (0, 0, 1))
    assert canonical_key(g, (1, 0, 0)) != canonical_key(g, (0, 1, 0))


def test_large_trees_and_cycles_have_keys():
    assert canonical_key(Graph.path(30)) == canonical_key(Graph.path(30).relabel(list(range(29, -1, -1))))
    assert canonical_key(Graph.cycle(25)) != canonical_key(Graph.path(25))


@given(graphs())
def test_components_partition_vertices(g):
    masks = component_masks(g)
    assert sum(bin(m).count("1") for m in masks) == g.n
    assert len(masks) == nx.number_connected_components(to_nx(g))
    for m in masks:
        v = (m & -m).bit_length() - 1
        assert component_of(g, v) == m


@given(graphs())
def test_acyclic_matches_networkx(g):
    assert is_acyclic(g) == nx.is_forest(to_nx(g))


@given(graphs())
def test_max_degree(g):
    assert max_degree(g) == max(g.degrees(), default=0)


def _longest_brute(g: Graph) -> int:
    h = to_nx(g)
    best = 1 if g.n else 0
    for u in h:
        for v in h:
            if u < v:
                for p in nx.all_simple_paths(h, u, v):
                    best = max(best, len(p))
    return best


@settings(max_examples=80)
@given(graphs(max_n=7))
def test_longest_path_matches_enumeration(g):
    assert longest_path_vertices(g) == _longest_brute(g)


@given(graphs())
def test_text_format_round_trip(g):
    assert parse_graph(format_graph(g)) == g


def test_parse_graph_errors():
    with pytest.raises(GraphError):
        parse_graph("")
    with pytest.raises(GraphError):
        parse_graph("3 2\n0 1\n")
    assert parse_graph("# comment\n3 1\n0 2\n").edges() == [(0, 2)]
