from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, to_nx
from satgame.graph import Graph, canonical_key, is_acyclic
from satgame.trees import brute_force_copies, contains_tree, count_embeddings, enumerate_trees


def test_tree_counts_match_networkx():
    for n in range(1, 11):
        ours = enumerate_trees(n)
        expected = sum(1 for _ in nx.nonisomorphic_trees(n)) if n > 1 else 1
        assert len(ours) == expected
        assert all(is_acyclic(t) and t.num_edges == n - 1 for t in ours)
        assert len({canonical_key(t) for t in ours}) == len(ours)


def test_enumeration_range():
    with pytest.raises(ValueError):
        enumerate_trees(0)
    with pytest.raises(ValueError):
        enumerate_trees(11)


def test_embedding_counts():
    assert count_embeddings(Graph.complete(4), Graph.path(3)) == 24
    assert brute_force_copies(Graph.complete(4), Graph.path(3)) == 12
    assert brute_force_copies(Graph.cycle(5), Graph.path(5)) == 5


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7), st.integers(1, 5), st.data())
def test_contains_tree_matches_subgraph_search(g, k, data):
    trees = enumerate_trees(k)
    t = data.draw(st.sampled_from(trees))
    matcher = nx.algorithms.isomorphism.GraphMatcher(to_nx(g), to_nx(t))
    assert contains_tree(g, t) == any(True for _ in matcher.subgraph_monomorphisms_iter())
