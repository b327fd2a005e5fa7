from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from satgame.graph import Graph
from satgame.patterns import (
    Cycle,
    Forbidden,
    Path,
    Star,
    Triangle,
    count_copies,
    creates_copy,
    doublestar_p4_lower_bound,
    is_f_free,
    parse_forbidden,
    parse_pattern,
    path_bounded_p4_upper_bound,
    star_count_by_degrees,
    tree_star_upper_bound,
)
from satgame.trees import brute_force_copies

PATTERNS = [Path(2), Path(3), Path(4), Path(5), Path(6), Star(3), Star(4), Star(5), Triangle(), Cycle(4), Cycle(5)]


def test_parse_round_trip():
    for text in ("P3", "S4", "K3", "C5", "p6"):
        assert str(parse_pattern(text)) == text.upper()
    assert parse_forbidden("cycles") == Forbidden.all_cycles()
    assert str(parse_forbidden("cycles")) == "cycles"
    for bad in ("", "Q3", "P1", "S2", "K4", "C2", "cycles"):
        with pytest.raises(ValueError):
            parse_pattern(bad)


def test_triangle_and_c3_agree():
    assert Triangle().graph() == Cycle(3).graph()
    assert count_copies(Graph.complete(4), Triangle()) == 4


def test_known_counts():
    k4 = Graph.complete(4)
    assert count_copies(k4, Path(3)) == 12
    assert count_copies(k4, Path(4)) == 12
    assert count_copies(k4, Cycle(4)) == 3
    assert count_copies(Graph.path(6), Path(4)) == 3
    assert count_copies(Graph.star(5), Star(4)) == comb(5, 3)
    assert count_copies(Graph.empty(3), Path(2)) == 0


@settings(max_examples=120)
@given(graphs(max_n=7), st.sampled_from(PATTERNS))
def test_count_matches_brute_force(g, h):
    assert count_copies(g, h) == brute_force_copies(g, h.graph())


@given(graphs(max_n=8), st.integers(3, 6))
def test_star_identity(g, l):
    expected = sum(comb(d, l - 1) for d in g.degrees())
    assert count_copies(g, Star(l)) == expected == star_count_by_degrees(g.degrees(), l)


@given(graphs(max_n=7), st.sampled_from(["P3", "P4", "S4", "K3", "C4", "cycles"]))
def test_creates_copy_agrees_with_freeness(g, ftext):
    f = parse_forbidden(ftext)
    if not is_f_free(g, f):
        return
    for u, v in g.non_edges():
        assert creates_copy(g, u, v, f) == (not is_f_free(g.add_edge(u, v), f))


def test_closed_form_bounds():
    assert tree_star_upper_bound(10, 4, 5) == comb(6, 4)
    assert doublestar_p4_lower_bound(2, 2, 8) == 4 + 2 + 2 - 1
    with pytest.raises(ValueError):
        doublestar_p4_lower_bound(2, 2, 6)
    assert path_bounded_p4_upper_bound(6, 6) == 3
    with pytest.raises(ValueError):
        path_bounded_p4_upper_bound(5, 3)
