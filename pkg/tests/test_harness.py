from __future__ import annotations

import pytest

from satgame import harness
from satgame.engine import GameSpec, Player
from satgame.errors import SatgameError
from satgame.harness import (
    CHECKS,
    VerificationReport,
    check_counterexample_replay,
    check_ids,
    counterexample,
    default_params,
    doublestar_formula,
    f_bound,
    fuzz_policy,
    replay_counterexample,
    run_check,
    run_checks,
)
from satgame.strategies import FACTORIES
from satgame.strategies.baseline import FirstLegal

FAST = ["table1", "p3-parity", "p4-table", "counting-oracle", "tree-lemmas", "doublestar-boundary"]


def test_catalog_covers_every_criterion():
    assert sorted({c.criterion for c in CHECKS.values()}) == list(range(1, 12))
    assert len(check_ids()) == len(set(check_ids()))
    with pytest.raises(SatgameError):
        default_params("nope")
    with pytest.raises(SatgameError):
        default_params("table1", "huge")


@pytest.mark.parametrize("cid", FAST)
def test_fast_checks_at_quick_level(cid):
    rep = run_check(cid, budget_level="quick")
    expected = "gap" if cid == "doublestar-boundary" else "pass"
    assert rep.verdict == expected
    assert rep.computed


def test_report_json_round_trip():
    rep = run_check("table1")
    again = VerificationReport.from_json(rep.to_json())
    assert again.to_json() == rep.to_json()
    assert rep.summary().startswith("table1")
    with pytest.raises(SatgameError):
        VerificationReport.from_dict({**rep.to_dict(), "verdict": "maybe"})


def test_reports_are_deterministic():
    a = run_check("counting-oracle", budget_level="quick").to_json()
    b = run_check("counting-oracle", budget_level="quick").to_json()
    assert a == b


def test_budget_verdict():
    rep = run_check("p6s4-zero", {"max_n": 9, "max_nodes": 3})
    assert rep.verdict == "budget" and rep.findings


def test_run_checks_keeps_order():
    reps = run_checks(["tree-lemmas", "table1"], budget_level="quick")
    assert [r.check for r in reps] == ["tree-lemmas", "table1"]


def test_counterexample_replays():
    spec = GameSpec.parse("S4", "P3", 5)
    cx = counterexample(spec, [(0, 1), (1, 2)], "demo")
    rec = replay_counterexample(cx)
    assert rec.replay().num_edges == 2
    bad = counterexample(spec, [(0, 1), (0, 1)])
    with pytest.raises(SatgameError):
        replay_counterexample(bad)


def test_fuzz_detects_broken_guarantee(monkeypatch):
    monkeypatch.setitem(harness.GUARANTEES, "first_legal", lambda spec, rec: "planted violation")
    rep = fuzz_policy("first_legal", n_min=3, n_max=6, games=5, seed=1)
    assert rep.verdict == "fail"
    assert rep.counterexample is not None and check_counterexample_replay(rep)


class _Gappy(FirstLegal):
    policy_id = "gappy"

    def decide(self, spec, g, memo, legal):
        if g.num_edges >= 2:
            raise self.gap("planted hole")
        return super().decide(spec, g, memo, legal)


def test_fuzz_reports_strategy_gaps(monkeypatch):
    monkeypatch.setitem(FACTORIES, "gappy", _Gappy)
    rep = fuzz_policy("gappy", n_min=4, n_max=6, games=4, seed=1)
    assert rep.verdict == "gap"
    assert "planted hole" in rep.findings[0]
    assert len(replay_counterexample(rep.counterexample).moves) == 2


def test_fuzz_is_seeded():
    a = fuzz_policy("mini_p6s4", n_max=12, games=30, seed=7)
    b = fuzz_policy("mini_p6s4", n_max=12, games=30, seed=7)
    assert a.to_json() == b.to_json() and a.verdict == "pass"


def test_closed_forms():
    assert f_bound(10, 6) == 15
    # the double star formula overshoots when no vertex lies outside D_{x,y}
    assert doublestar_formula(2, 2, 6) == 5
