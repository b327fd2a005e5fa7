from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satgame.engine import GameSpec, GameState, Player, legal_moves, play_out
from satgame.errors import InapplicablePolicy, SatgameError
from satgame.graph import Graph, canonical_key
from satgame.solver import best_response, solve
from satgame.strategies import (
    FACTORIES,
    TreeBuilder,
    balanced_doublestar,
    catalog,
    classify_component,
    get_policy,
    policy_ids,
)
from satgame.strategies.shapes import DOUBLE_STAR, G41, K4_MINUS_E, LONG_PATH
from satgame.trees import contains_tree, enumerate_trees


def br(forbid, score, n, starter, pid, side):
    spec = GameSpec.parse(forbid, score, n, starter)
    return best_response(spec, get_policy(pid), side).value


def test_catalog_lists_every_policy():
    rows = catalog()
    assert [r["policy"] for r in rows] == policy_ids() == sorted(FACTORIES)
    assert all(r["applies_to"] and r["summary"] for r in rows)
    with pytest.raises(SatgameError):
        get_policy("nope")


def test_applicability_is_enforced():
    p = get_policy("mini_p6s4")
    assert p.applicable(GameSpec.parse("S4", "P6", 9), Player.MINI)
    assert not p.applicable(GameSpec.parse("S4", "P6", 9), Player.MAX)
    with pytest.raises(InapplicablePolicy):
        p.check_applicable(GameSpec.parse("S4", "P5", 9), Player.MINI)


def test_classify_component_shapes():
    g = Graph.double_star(2, 3)
    assert classify_component(g, (1 << g.n) - 1).kind == DOUBLE_STAR
    assert classify_component(g, (1 << g.n) - 1).params == (2, 3)
    assert classify_component(Graph.path(6), 0b111111).kind == LONG_PATH
    k4e = Graph.complete(4)
    k4e = Graph.from_edges(4, [e for e in k4e.edges() if e != (0, 1)])
    assert classify_component(k4e, 0b1111).kind == K4_MINUS_E
    paw = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert classify_component(paw, 0b1111).kind == G41


@pytest.mark.parametrize("starter", list(Player))
def test_max_path_extension_is_optimal_for_p3(starter):
    for n in range(4, 11):
        spec = GameSpec.parse("S4", "P3", n, starter)
        assert best_response(spec, get_policy("max_path_extension"), Player.MAX).value == solve(spec).value


def test_mini_reduction_holds_p3_value():
    for n in range(3, 11):
        for starter in Player:
            spec = GameSpec.parse("S4", "P3", n, starter)
            p = get_policy("mini_reduction_345")
            if p.applicable(spec, Player.MINI):
                assert best_response(spec, p, Player.MINI).value == solve(spec).value


def test_mini_p6s4_keeps_score_zero():
    for n in range(1, 9):
        for starter in Player:
            assert br("S4", "P6", n, starter, "mini_p6s4", Player.MINI) == 0


def test_mini_p5s4_upper_bound():
    for n in range(1, 9):
        for starter in Player:
            assert br("S4", "P5", n, starter, "mini_p5s4", Player.MINI) <= 6


def test_max_p5s4_second_lower_bound():
    for n in (5, 8):
        assert br("S4", "P5", n, "mini", "max_p5s4_second", Player.MAX) >= 5


def test_triangle_policies_meet_bounds():
    for n in range(5, 8):
        low = Fraction(n - 4, 3)
        for starter in Player:
            assert br("P5", "K3", n, starter, "max_t1", Player.MAX) >= low
            assert br("P5", "K3", n, starter, "mini_t1", Player.MINI) <= low + 4


def test_nonleaf_maker_star_bound():
    for n in (8, 9):
        for starter in Player:
            assert br("cycles", "S5", n, starter, "mini_nonleaf_maker", Player.MINI) <= comb((n + 1) // 2, 4)


def test_balanced_doublestar():
    assert balanced_doublestar(10) == (2, 2)
    assert balanced_doublestar(13) == (2, 3)


@pytest.mark.parametrize("n", [5, 6])
def test_treebuilder_builds_every_tree(n):
    for tree in enumerate_trees(n // 2 + 1):
        for side in Player:
            for starter in Player:
                spec = GameSpec.parse("cycles", "P3", n, starter)
                res = best_response(spec, TreeBuilder(tree, side=side), side,
                                    score_fn=lambda g: int(contains_tree(g, tree)), adversary="min")
                assert res.value == 1


@pytest.mark.parametrize("pid", policy_ids())
def test_policies_play_legal_games(pid):
    p = get_policy(pid)
    rng = random.Random(pid)
    played = 0
    for forbid, score in [("S4", "P3"), ("S4", "P4"), ("S4", "P5"), ("S4", "P6"), ("P5", "K3"),
                          ("P4", "P3"), ("P5", "P4"), ("P6", "P3"), ("cycles", "P4"), ("cycles", "S5")]:
        for n in range(2, 13):
            for starter in Player:
                spec = GameSpec.parse(forbid, score, n, starter)
                for side in Player:
                    if not p.applicable(spec, side):
                        continue
                    other = get_policy("uniform_random")
                    pm, pn = (p, other) if side is Player.MAX else (other, p)
                    play_out(spec, pm, pn, seed=rng.randrange(10**6))
                    played += 1
    assert played > 0


def test_policy_choice_is_deterministic():
    spec = GameSpec.parse("S4", "P5", 12, "mini")
    a = play_out(spec, get_policy("uniform_random"), get_policy("mini_p5s4"), seed=5)
    b = play_out(spec, get_policy("uniform_random"), get_policy("mini_p5s4"), seed=5)
    assert a.moves == b.moves


def _random_forest(seed: int, n: int) -> Graph:
    spec = GameSpec.parse("cycles", "S5", n)
    rng = random.Random(seed)
    state = GameState.initial(spec)
    for _ in range(rng.randrange(n - 2)):
        state = GameState(state.graph.add_edge(*rng.choice(legal_moves(spec, state))), state.to_move.other)
    return state.graph


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(6, 10), st.data())
def test_stateless_choice_commutes_with_relabelling(seed, n, data):
    g = _random_forest(seed, n)
    perm = data.draw(st.permutations(range(n)))
    spec = GameSpec.parse("cycles", "S5", n, "mini")
    p = get_policy("mini_nonleaf_maker")
    memo = p.initial(spec, Player.MINI)
    a = p.choose(spec, g, memo)
    h = g.relabel(perm)
    b = p.choose(spec, h, memo)
    assert canonical_key(g.add_edge(*a)) == canonical_key(h.add_edge(*b))
