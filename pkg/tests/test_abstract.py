from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satgame.abstract import (
    AbstractS4State,
    abstract_from_graph,
    abstract_moves,
    abstract_solve,
    game_deficit,
    is_abstract_terminal,
    published_p3_value,
    published_p4_cell,
    rows_to_csv,
    rows_to_json,
    table_p3,
    table_p4,
    theorem_p3_closed_form,
)
from satgame.engine import GameSpec, GameState, Player, legal_moves
from satgame.errors import GraphError
from satgame.graph import Graph
from satgame.patterns import Path
from satgame.solver import Solver


def test_p3_table_matches_published_cells():
    for n in range(1, 13):
        for p in Player:
            assert n + game_deficit(n, p, Path(3)) == published_p3_value(n, p)


def test_p3_closed_form_from_8():
    for n in range(8, 65):
        for p in Player:
            assert n + game_deficit(n, p, Path(3)) == theorem_p3_closed_form(n, p)
    with pytest.raises(ValueError):
        theorem_p3_closed_form(7, Player.MAX)


def test_p4_small_cells():
    for n in (1, 2, 3):
        for p in Player:
            assert game_deficit(n, p, Path(4)) == -n
    assert game_deficit(4, Player.MAX, Path(4)) == game_deficit(4, Player.MINI, Path(4)) == 0
    assert game_deficit(5, Player.MINI, Path(4)) == 0
    assert game_deficit(8, Player.MAX, Path(4)) <= -2
    assert game_deficit(9, Player.MINI, Path(4)) <= -2


def test_p4_deficit_floor_and_comparison():
    for n in range(4, 41):
        for p in Player:
            d4 = game_deficit(n, p, Path(4))
            assert d4 >= -3
            assert d4 <= game_deficit(n, p, Path(3))


def test_p4_mini_start_4l_plus_3():
    for l in range(1, 10):
        assert game_deficit(4 * l + 3, Player.MINI, Path(4)) == -3


def test_published_p4_cell_shape():
    assert published_p4_cell(4, Player.MAX) == ("=", 4)
    assert published_p4_cell(5, Player.MAX)[0] == "<="
    with pytest.raises(ValueError):
        published_p4_cell(0, Player.MAX)


def test_tables_render():
    rows = table_p3(12)
    assert len(rows) == 12 and all(r.match for r in rows)
    csv_text = rows_to_csv(rows)
    assert csv_text.splitlines()[0] == "n,s1,s2,published_s1,published_s2,match,bound_only"
    assert '"n": 12' in rows_to_json(rows)
    assert all(r.match for r in table_p4(20))


def test_from_graph_buckets_components():
    g = Graph.from_edges(10, [(0, 1), (2, 3), (3, 4), (5, 6), (6, 7), (7, 5)])
    state, banked = abstract_from_graph(g, Path(4))
    assert state.counters() == (2, 1, 1, 0) and banked == -3
    state, banked = abstract_from_graph(g, Path(3))
    assert state.counters() == (2, 1, 0, 1) and banked == 0
    with pytest.raises(GraphError):
        abstract_from_graph(Graph.star(3), Path(3))
    with pytest.raises(ValueError):
        abstract_from_graph(g, Path(5))


def test_terminal_states():
    assert is_abstract_terminal(AbstractS4State(1, 0, 0, 0))
    assert not is_abstract_terminal(AbstractS4State(2, 0, 0, 0))
    assert abstract_moves(AbstractS4State(0, 1, 0, 0), Path(3)) == []
    assert abstract_solve(AbstractS4State(0, 1, 0, 0), Path(3)) == -2


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.sampled_from(["P3", "P4"]), st.sampled_from(list(Player)), st.integers(0, 10**6))
def test_abstraction_matches_concrete_solver(n, score, starter, seed):
    spec = GameSpec.parse("S4", score, n, starter)
    rng = random.Random(seed)
    state = GameState.initial(spec)
    for _ in range(rng.randrange(n + 1)):
        moves = legal_moves(spec, state)
        if not moves:
            break
        m = rng.choice(moves)
        state = GameState(state.graph.add_edge(*m), state.to_move.other)
    abstract, banked = abstract_from_graph(state.graph, spec.score, state.to_move)
    assert Solver(spec).solve_value(state) == n + banked + abstract_solve(abstract, spec.score)
