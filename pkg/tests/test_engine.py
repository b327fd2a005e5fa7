from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satgame.engine import (
    GameRecord,
    GameSpec,
    GameState,
    Player,
    apply_move,
    final_score,
    is_terminal,
    legal_moves,
    play_out,
)
from satgame.errors import IllegalMove, SatgameError
from satgame.patterns import is_f_free
from satgame.strategies import get_policy


def test_player_indices():
    assert Player.MAX.index == 1 and Player.MINI.index == 2
    assert Player.parse("1") is Player.MAX and Player.parse("2") is Player.MINI
    assert Player.parse("Mini") is Player.MINI
    assert Player.MAX.other is Player.MINI
    with pytest.raises(ValueError):
        Player.parse("3")


def test_spec_parse_and_fingerprint():
    spec = GameSpec.parse("S4", "P3", 6, "mini")
    assert spec.fingerprint() == "F=S4;H=P3;n=6;start=mini"
    assert GameSpec.from_dict(spec.to_dict()) == spec
    assert spec.to_move(0) is Player.MINI and spec.to_move(1) is Player.MAX
    with pytest.raises(ValueError):
        GameSpec.parse("S4", "P3", 0)


def test_illegal_moves_rejected():
    spec = GameSpec.parse("S4", "P3", 5)
    state = GameState.initial(spec)
    for m in [(0, 1), (0, 2)]:
        state = apply_move(spec, state, m)
    with pytest.raises(IllegalMove):
        apply_move(spec, state, (0, 3))  # centre 0 would get three leaves
    with pytest.raises(IllegalMove):
        apply_move(spec, state, (0, 1))


def test_final_score_requires_terminal():
    spec = GameSpec.parse("S4", "P3", 3)
    with pytest.raises(SatgameError):
        final_score(spec, GameState.initial(spec).graph)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S4", "P4", "P5", "K3", "cycles"]), st.integers(1, 9), st.integers(0, 1000))
def test_random_games_stay_free_and_end_saturated(forbid, n, seed):
    spec = GameSpec.parse(forbid, "P3", n)
    rand = get_policy("uniform_random")
    rec = play_out(spec, rand, rand, seed=seed)
    g = rec.final_graph
    assert is_f_free(g, spec.forbidden)
    assert is_terminal(spec, GameState(g, spec.to_move(g.num_edges)))
    assert rec.replay() == g
    assert rec.final_score == final_score(spec, g)


def test_cycle_free_games_end_in_spanning_trees():
    spec = GameSpec.parse("cycles", "P4", 9)
    rec = play_out(spec, get_policy("first_legal"), get_policy("uniform_random"), seed=3)
    assert rec.final_graph.num_edges == 8


def test_record_round_trip():
    spec = GameSpec.parse("P5", "K3", 6, "mini")
    rec = play_out(spec, get_policy("uniform_random"), get_policy("first_legal"), seed=11)
    again = GameRecord.from_json(rec.to_json())
    assert again.to_json() == rec.to_json()
    assert again.movers()[0] is Player.MINI


def test_record_schema_checked():
    with pytest.raises(SatgameError):
        GameRecord.from_dict({"schema": "other", "spec": {}, "moves": []})


def test_legal_moves_sorted_and_normalised():
    spec = GameSpec.parse("S4", "P3", 4)
    moves = legal_moves(spec, GameState.initial(spec))
    assert moves == sorted(moves) and all(u < v for u, v in moves) and len(moves) == 6
