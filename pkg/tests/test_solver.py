from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satgame.engine import GameSpec, GameState, Player, apply_move
from satgame.errors import BudgetExceeded, CacheError, SatgameError
from satgame.patterns import count_copies
from satgame.solver import (
    Solver,
    best_response,
    default_budget,
    explore,
    reference_value,
    solve,
)
from satgame.strategies import get_policy

FORBIDS = ["S4", "P4", "P5", "K3", "C4", "cycles"]
SCORES = ["P3", "P4", "S3", "K3"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FORBIDS), st.sampled_from(SCORES), st.integers(1, 5), st.sampled_from(["max", "mini"]))
def test_solver_matches_reference_minimax(forbid, score, n, starter):
    spec = GameSpec.parse(forbid, score, n, starter)
    assert solve(spec).value == reference_value(spec)


@pytest.mark.parametrize("forbid,score", [("S4", "P3"), ("P5", "K3"), ("cycles", "S4")])
def test_solver_matches_memoised_reference_at_n6(forbid, score):
    for starter in Player:
        spec = GameSpec.parse(forbid, score, 6, starter)
        assert solve(spec).value == reference_value(spec, memo=True)


def test_dedup_does_not_change_values():
    spec = GameSpec.parse("P5", "P3", 6)
    assert Solver(spec, dedup=False).solve().value == Solver(spec).solve().value


def test_published_small_values():
    assert solve(GameSpec.parse("S4", "P3", 5, "mini")).value == 5
    assert solve(GameSpec.parse("S4", "P3", 5, "max")).value == 4
    assert solve(GameSpec.parse("S4", "P6", 9, "max")).value == 0


def test_principal_variation_realises_value():
    spec = GameSpec.parse("S4", "P4", 7, "mini")
    res = solve(spec)
    state = GameState.initial(spec)
    for m in res.principal_variation:
        state = apply_move(spec, state, m)
    assert count_copies(state.graph, spec.score) == res.value


def test_budget_exhaustion():
    with pytest.raises(BudgetExceeded):
        Solver(GameSpec.parse("S4", "P3", 8), max_nodes=5).solve()


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("SATGAME_MAX_NODES", "123")
    assert default_budget() == 123
    monkeypatch.setenv("SATGAME_MAX_NODES", "lots")
    with pytest.raises(SatgameError):
        default_budget()


def test_cache_round_trip(tmp_path):
    spec = GameSpec.parse("S4", "P4", 8)
    path = str(tmp_path / "c.tsv")
    first = Solver(spec)
    value = first.solve().value
    written = first.save_cache(path)
    assert written == len(first.table)
    assert first.save_cache(path) == 0
    second = Solver(spec)
    assert second.load_cache(path) == written
    res = second.solve(with_pv=False)
    assert res.value == value and res.nodes_expanded == 0


def test_cache_rejects_other_spec_and_garbage(tmp_path):
    path = tmp_path / "c.tsv"
    s = Solver(GameSpec.parse("S4", "P4", 6))
    s.solve()
    s.save_cache(str(path))
    with pytest.raises(CacheError):
        Solver(GameSpec.parse("S4", "P3", 6)).load_cache(str(path))
    path.write_text(path.read_text() + "zz\tmax\t1\n")
    with pytest.raises(CacheError):
        Solver(GameSpec.parse("S4", "P4", 6)).load_cache(str(path))


def test_threads_give_same_value():
    spec = GameSpec.parse("P5", "K3", 7)
    assert solve(spec, threads=2).value == solve(spec).value


def test_explore_counts_classes():
    states = explore(GameSpec.parse("S4", "P3", 4))
    # empty, K2, 2K2, P3, P3+K1 ... every reachable class appears once
    assert len(states) == len({k for k in states})
    with pytest.raises(BudgetExceeded):
        explore(GameSpec.parse("S4", "P3", 9), max_states=10)


@pytest.mark.parametrize("side", list(Player))
def test_best_response_brackets_exact_value(side):
    spec = GameSpec.parse("S4", "P3", 6)
    exact = solve(spec).value
    br = best_response(spec, get_policy("first_legal"), side)
    if side is Player.MAX:
        assert br.value <= exact
    else:
        assert br.value >= exact
    assert not br.memoized  # baseline policies have no fingerprint


def test_best_response_of_optimal_policy_is_exact():
    for n in range(4, 10):
        spec = GameSpec.parse("S4", "P3", n, "mini")
        assert best_response(spec, get_policy("max_path_extension"), Player.MAX).value == solve(spec).value
