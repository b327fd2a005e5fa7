"""Verification checks: published tables, bounds, policy audits and fuzzing.

Every check returns a :class:`VerificationReport`.  Reports hold no
timings or other run-dependent data, so two runs with the same parameters
serialise to identical JSON.  Verdicts:

``pass``    every cell of the check holds
``fail``    some cell is violated; ``counterexample`` replays it
``gap``     a finding: the computation contradicts a stated claim that the
            check is designed to audit, or a strategy left its case analysis
``budget``  the node budget ran out
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .abstract import (
    abstract_from_graph,
    abstract_solve,
    game_deficit,
    table_p3,
    table_p4,
    theorem_p3_closed_form,
)
from .engine import GameRecord, GameSpec, GameState, Player, play_out
from .errors import BudgetExceeded, InvariantViolation, SatgameError, StrategyGap
from .graph import Graph, bits, component_masks, longest_path_vertices, popcount
from .patterns import (
    Cycle,
    Path,
    Star,
    Triangle,
    count_copies,
    doublestar_p4_lower_bound,
    path_bounded_p4_upper_bound,
    star_count_by_degrees,
    tree_star_upper_bound,
)
from .solver import Solver, best_response, default_budget, explore
from .strategies import balanced_doublestar, get_policy, policy_ids, t1_shape_ok
from .strategies.cyclefree import TreeBuilder
from .trees import brute_force_copies, contains_tree, enumerate_trees

REPORT_SCHEMA = "satgame/report/1"
VERDICTS = ("pass", "fail", "gap", "budget")


@dataclass
class VerificationReport:
    check: str
    params: dict
    claim: str
    anchor: str
    verdict: str
    computed: list = field(default_factory=list)
    counterexample: dict | None = None
    findings: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "check": self.check,
            "params": self.params,
            "claim": self.claim,
            "anchor": self.anchor,
            "verdict": self.verdict,
            "computed": self.computed,
            "counterexample": self.counterexample,
            "findings": self.findings,
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        if d.get("schema") != REPORT_SCHEMA:
            raise SatgameError(f"not a {REPORT_SCHEMA} report")
        if d["verdict"] not in VERDICTS:
            raise SatgameError(f"unknown verdict {d['verdict']!r}")
        fields = {k: d[k] for k in ("check", "params", "claim", "anchor", "verdict")}
        return cls(**fields, computed=d.get("computed", []), counterexample=d.get("counterexample"),
                   findings=d.get("findings", []), stats=d.get("stats", {}))

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    @property
    def ok(self) -> bool:
        return self.verdict != "fail"

    def summary(self) -> str:
        cells = len(self.computed)
        bad = sum(1 for c in self.computed if isinstance(c, dict) and c.get("ok") is False)
        return f"{self.check:<20} {self.verdict:<7} {cells - bad}/{cells} cells"


def counterexample(spec: GameSpec, moves, note: str = "") -> dict:
    """A replayable game prefix."""
    rec = GameRecord(spec, [tuple(m) for m in moves])
    d = {"record": rec.to_dict(), "note": note}
    return d


def replay_counterexample(cx: dict) -> GameRecord:
    rec = GameRecord.from_dict(cx["record"])
    rec.replay()
    return rec


class _Collector:
    """Accumulates cells; the first failing cell supplies the counterexample."""

    def __init__(self):
        self.cells: list[dict] = []
        self.cx: dict | None = None
        self.findings: list[str] = []
        self.gap = False
        self.nodes = 0

    def cell(self, ok: bool, cx: dict | None = None, **data) -> bool:
        data["ok"] = bool(ok)
        self.cells.append(data)
        if not ok and self.cx is None and cx is not None:
            self.cx = cx
        return ok

    def strategy_gap(self, spec: GameSpec, exc: StrategyGap, **data) -> None:
        self.gap = True
        self.findings.append(f"{exc.policy_id}: {exc.detail}")
        data["ok"] = None
        data["gap"] = exc.detail
        self.cells.append(data)
        if self.cx is None:
            self.cx = counterexample(spec, exc.history, f"strategy gap: {exc.detail}")

    def verdict(self) -> str:
        if any(c.get("ok") is False for c in self.cells):
            return "fail"
        return "gap" if self.gap else "pass"


def _spec(forbid: str, score: str, n: int, starter: Player | str) -> GameSpec:
    return GameSpec.parse(forbid, score, n, starter)


def _exact(spec: GameSpec, col: _Collector, max_nodes: int) -> tuple[int, Solver]:
    solver = Solver(spec, max_nodes=max_nodes)
    value = solver.solve_value(GameState.initial(spec))
    col.nodes += solver.nodes_expanded
    return value, solver


def _pv_cx(spec: GameSpec, solver: Solver, note: str) -> dict:
    return counterexample(spec, solver.principal_variation(GameState.initial(spec)), note)


# -- S4 tables ------------------------------------------------------------------------------


def check_table1(p: dict, col: _Collector) -> None:
    for row in table_p3(p["max_n"]):
        col.cell(row.match, n=row.n, s1=row.s1, s2=row.s2, expected_s1=row.published_s1, expected_s2=row.published_s2)


def check_p3_parity(p: dict, col: _Collector) -> None:
    for row in table_p3(p["max_n"]):
        if row.n < p["min_n"]:
            continue
        e1 = theorem_p3_closed_form(row.n, Player.MAX)
        e2 = theorem_p3_closed_form(row.n, Player.MINI)
        col.cell(row.s1 == e1 and row.s2 == e2, n=row.n, s1=row.s1, s2=row.s2, expected_s1=e1, expected_s2=e2)


def check_concrete_abstract(p: dict, col: _Collector) -> None:
    for score in p["scorings"]:
        for n in range(1, p["max_n"] + 1):
            for starter in Player:
                spec = _spec("S4", score, n, starter)
                solver = Solver(spec, max_nodes=p["max_nodes"])
                states = explore(spec)
                bad = None
                for state in states.values():
                    concrete = solver.solve_value(state)
                    abs_state, banked = abstract_from_graph(state.graph, spec.score, state.to_move)
                    predicted = n + banked + abstract_solve(abs_state, spec.score)
                    if concrete != predicted and bad is None:
                        bad = (state, concrete, predicted)
                col.nodes += solver.nodes_expanded
                cx = None
                if bad is not None:
                    cx = counterexample(spec, bad[0].graph.edges(), f"position value {bad[1]} vs abstract {bad[2]}")
                    cx["position_only"] = True
                col.cell(bad is None, cx, score=score, n=n, starter=starter.value, states=len(states))


def check_p4_table(p: dict, col: _Collector) -> None:
    max_n = p["max_n"]
    p4 = Path(4)
    d = {(n, s): game_deficit(n, s, p4) for n in range(1, max_n + 1) for s in Player}
    for row in table_p4(max_n):
        col.cell(row.match, item="published cell", n=row.n, s1=row.s1, s2=row.s2,
                 expected_s1=row.published_s1, expected_s2=row.published_s2, bound_only=row.bound_only)
    for n in range(1, 4):
        for s in Player:
            col.cell(d[n, s] == -n, item="deficit is -n for n <= 3", n=n, starter=s.value, deficit=d[n, s])
    for n, s in ((4, Player.MAX), (4, Player.MINI), (5, Player.MINI)):
        col.cell(d[n, s] == 0, item="zero deficit", n=n, starter=s.value, deficit=d[n, s])
    for n, s in ((8, Player.MAX), (9, Player.MINI)):
        col.cell(d[n, s] <= -2, item="deficit at most -2", n=n, starter=s.value, deficit=d[n, s])
    for n in range(4, max_n + 1):
        for s in Player:
            col.cell(d[n, s] >= -3, item="deficit at least -3", n=n, starter=s.value, deficit=d[n, s])
    for n in range(3, max_n + 1, 4):
        col.cell(d[n, Player.MINI] == -3, item="deficit -3 at n = 4l+3, Mini first", n=n, deficit=d[n, Player.MINI])
    p3 = Path(3)
    for n in range(1, max_n + 1):
        for s in Player:
            ok = d[n, s] <= game_deficit(n, s, p3)
            col.cell(ok, item="P4 score at most P3 score", n=n, starter=s.value)


# -- longer paths in S4 games ---------------------------------------------------------------------


def _policy_br(col: _Collector, spec: GameSpec, pid: str, side: Player, max_nodes: int, **kw):
    """Best-response value, or None after recording a strategy gap."""
    try:
        r = best_response(spec, get_policy(pid), side, max_nodes=max_nodes, **kw)
    except StrategyGap as exc:
        col.strategy_gap(spec, exc, policy=pid, n=spec.n, starter=spec.starter.value)
        return None
    col.nodes += r.nodes_expanded
    return r


def check_p5s4_upper(p: dict, col: _Collector) -> None:
    for n in range(1, p["max_n"] + 1):
        for s in Player:
            spec = _spec("S4", "P5", n, s)
            v, solver = _exact(spec, col, p["max_nodes"])
            col.cell(v <= 6, _pv_cx(spec, solver, f"value {v}"), n=n, starter=s.value, value=v, bound="<=6")
            r = _policy_br(col, spec, "mini_p5s4", Player.MINI, p["max_nodes"])
            if r is not None:
                col.cell(r.value <= 6, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="mini_p5s4", n=n, starter=s.value, value=r.value, bound="<=6")


def _p5s4_lower_ns(max_n: int) -> list[int]:
    return [n for n in range(5, max_n + 1) if (n % 4 == 0 and n >= 8) or n % 4 == 1]


def check_p5s4_lower(p: dict, col: _Collector) -> None:
    for n in _p5s4_lower_ns(p["max_n"]):
        spec = _spec("S4", "P5", n, Player.MINI)
        v, solver = _exact(spec, col, p["max_nodes"])
        col.cell(v >= 5, _pv_cx(spec, solver, f"value {v}"), n=n, starter="mini", value=v, bound=">=5")
        r = _policy_br(col, spec, "max_p5s4_second", Player.MAX, p["max_nodes"])
        if r is not None:
            col.cell(r.value >= 5, counterexample(spec, r.line, f"policy value {r.value}"),
                     policy="max_p5s4_second", n=n, value=r.value, bound=">=5")


def check_p6s4_zero(p: dict, col: _Collector) -> None:
    for n in range(1, p["max_n"] + 1):
        for s in Player:
            spec = _spec("S4", "P6", n, s)
            v, solver = _exact(spec, col, p["max_nodes"])
            col.cell(v == 0, _pv_cx(spec, solver, f"value {v}"), n=n, starter=s.value, value=v, bound="=0")
            r = _policy_br(col, spec, "mini_p6s4", Player.MINI, p["max_nodes"])
            if r is not None:
                col.cell(r.value == 0, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="mini_p6s4", n=n, starter=s.value, value=r.value, bound="=0")


def check_s4_policies(p: dict, col: _Collector) -> None:
    """Exact best responses against the P3/P4 strategies of S4 games."""
    mn = p["max_nodes"]
    for n in range(8, p["max_n"] + 1):
        for s in Player:
            spec = _spec("S4", "P3", n, s)
            target = theorem_p3_closed_form(n, s)
            r = _policy_br(col, spec, "max_path_extension", Player.MAX, mn)
            if r is not None:
                col.cell(r.value >= target, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="max_path_extension", n=n, starter=s.value, value=r.value, bound=f">={target}")
            if (n + s.index) % 2 == 0:
                r = _policy_br(col, spec, "mini_reduction_345", Player.MINI, mn)
                if r is not None:
                    col.cell(r.value <= n - 1, counterexample(spec, r.line, f"policy value {r.value}"),
                             policy="mini_reduction_345", n=n, starter=s.value, value=r.value, bound=f"<={n - 1}")
    for n in range(3, p["max_n_matching"] + 1, 4):
        spec = _spec("S4", "P4", n, Player.MINI)
        r = _policy_br(col, spec, "mini_matching_extension", Player.MINI, mn)
        if r is not None:
            col.cell(r.value <= n - 3, counterexample(spec, r.line, f"policy value {r.value}"),
                     policy="mini_matching_extension", n=n, starter="mini", value=r.value, bound=f"<={n - 3}")


# -- P5-free games scored by triangles -------------------------------------------------------------


def _t1_bounds(n: int) -> tuple[Fraction, Fraction]:
    lo = Fraction(n - 4, 3)
    return lo, lo + 4


def check_t1_bounds(p: dict, col: _Collector) -> None:
    for n in range(p["min_n"], p["max_n"] + 1):
        lo, hi = _t1_bounds(n)
        for s in Player:
            spec = _spec("P5", "K3", n, s)
            v, solver = _exact(spec, col, p["max_nodes"])
            col.cell(lo <= v <= hi, _pv_cx(spec, solver, f"value {v}"), n=n, starter=s.value, value=v,
                     lower=str(lo), upper=str(hi))


def check_t1_policies(p: dict, col: _Collector) -> None:
    for n in range(p["min_n"], p["max_n"] + 1):
        lo, hi = _t1_bounds(n)
        for s in Player:
            spec = _spec("P5", "K3", n, s)
            r = _policy_br(col, spec, "max_t1", Player.MAX, p["max_nodes"])
            if r is not None:
                col.cell(r.value >= lo, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="max_t1", n=n, starter=s.value, value=r.value, bound=f">={lo}")
            r = _policy_br(col, spec, "mini_t1", Player.MINI, p["max_nodes"])
            if r is not None:
                col.cell(r.value <= hi, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="mini_t1", n=n, starter=s.value, value=r.value, bound=f"<={hi}")


# -- cycle-free games ----------------------------------------------------------------------------


def check_t2_bounds(p: dict, col: _Collector) -> None:
    for k in p["ks"]:
        for n in range(p["min_n"], p["max_n"] + 1):
            lo, hi = comb(n // 2, k - 1), comb((n + 1) // 2, k - 1)
            for s in Player:
                spec = _spec("cycles", f"S{k}", n, s)
                v, solver = _exact(spec, col, p["max_nodes"])
                col.cell(lo <= v <= hi, _pv_cx(spec, solver, f"value {v}"), k=k, n=n, starter=s.value,
                         value=v, lower=lo, upper=hi)
                r = _policy_br(col, spec, "mini_nonleaf_maker", Player.MINI, p["max_nodes"])
                if r is not None:
                    col.cell(r.value <= hi, counterexample(spec, r.line, f"policy value {r.value}"),
                             policy="mini_nonleaf_maker", k=k, n=n, starter=s.value, value=r.value, bound=f"<={hi}")
                star = TreeBuilder(Graph.star(n // 2), "treebuilder_star", Player.MAX)
                try:
                    r = best_response(spec, star, Player.MAX, max_nodes=p["max_nodes"])
                except StrategyGap as exc:
                    col.strategy_gap(spec, exc, policy="treebuilder_star", n=n, starter=s.value)
                    continue
                col.nodes += r.nodes_expanded
                col.cell(r.value >= lo, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="treebuilder(star)", k=k, n=n, starter=s.value, value=r.value, bound=f">={lo}")


def treebuilder_success(n: int, tree: Graph, builder: Player, starter: Player, max_nodes: int):
    """Whether the builder embeds ``tree`` against every opponent, with the opponent's best line."""
    spec = GameSpec.parse("cycles", "P3", n, starter)
    policy = TreeBuilder(tree, "treebuilder", builder)
    r = best_response(spec, policy, builder, score_fn=lambda g: int(contains_tree(g, tree)),
                      adversary="min", max_nodes=max_nodes)
    return r.value == 1, r


def check_treebuilder(p: dict, col: _Collector) -> None:
    for n in range(p["min_n"], p["max_n"] + 1):
        for tree in enumerate_trees(n // 2 + 1):
            for builder in Player:
                for starter in Player:
                    spec = GameSpec.parse("cycles", "P3", n, starter)
                    try:
                        ok, r = treebuilder_success(n, tree, builder, starter, p["max_nodes"])
                    except StrategyGap as exc:
                        col.strategy_gap(spec, exc, n=n, tree=tree.edges())
                        continue
                    col.nodes += r.nodes_expanded
                    col.cell(ok, counterexample(spec, r.line, "tree not built"), n=n, tree=tree.edges(),
                             builder=builder.value, starter=starter.value)


def f_bound(n: int, s: int) -> int:
    return path_bounded_p4_upper_bound(n, s)


def check_t3_policies(p: dict, col: _Collector) -> None:
    for n in range(p["min_n"], p["max_n"] + 1):
        x, y = balanced_doublestar(n)
        lo = doublestar_p4_lower_bound(x, y, n)
        hi = f_bound(n, n // 2 + 1)
        for s in Player:
            spec = _spec("cycles", "P4", n, s)
            r = _policy_br(col, spec, "max_doublestar", Player.MAX, p["max_nodes"])
            if r is not None:
                col.cell(r.value >= lo, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="max_doublestar", n=n, starter=s.value, x=x, y=y, value=r.value, bound=f">={lo}")
            r = _policy_br(col, spec, "mini_pathbuilder", Player.MINI, p["max_nodes"])
            if r is not None:
                col.cell(r.value <= hi, counterexample(spec, r.line, f"policy value {r.value}"),
                         policy="mini_pathbuilder", n=n, starter=s.value, value=r.value, bound=f"<={hi}")


# -- counting and tree lemmas -------------------------------------------------------------------------


COUNT_PATTERNS = (Path(2), Path(3), Path(4), Path(5), Path(6), Star(3), Star(4), Star(5),
                  Triangle(), Cycle(4), Cycle(5), Cycle(6))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def check_counting_oracle(p: dict, col: _Collector) -> None:
    rng = random.Random(p["seed"])
    mismatches = 0
    star_mismatches = 0
    first = None
    for i in range(p["graphs"]):
        n = rng.randint(1, p["max_n"])
        g = random_graph(rng, n, rng.choice((0.2, 0.35, 0.5, 0.7)))
        for pat in COUNT_PATTERNS:
            if pat.order > n:
                continue
            got = count_copies(g, pat)
            want = brute_force_copies(g, pat.graph())
            if got != want:
                mismatches += 1
                first = first or {"graph": g.edges(), "n": n, "pattern": str(pat), "got": got, "want": want}
        for l in (3, 4, 5):
            if star_count_by_degrees(g.degrees(), l) != count_copies(g, Star(l)):
                star_mismatches += 1
    col.cell(mismatches == 0, None, item="count_copies vs embedding count", graphs=p["graphs"], mismatches=mismatches,
             first=first)
    col.cell(star_mismatches == 0, None, item="star identity", graphs=p["graphs"], mismatches=star_mismatches)


def _non_leaves(t: Graph) -> int:
    return sum(1 for v in range(t.n) if popcount(t.rows[v]) >= 2)


def doublestar_formula(x: int, y: int, n: int) -> int:
    # the stated lower bound, evaluated without the n > x + y + 2 guard
    return x * y + min(x, y) + (n - x - y - 2) - 1


def _contained_doublestars(t: Graph):
    for u in range(t.n):
        for v in bits(t.rows[u]):
            du, dv = popcount(t.rows[u]) - 1, popcount(t.rows[v]) - 1
            for x in range(1, du + 1):
                for y in range(x, dv + 1):
                    yield x, y


def check_tree_lemmas(p: dict, col: _Collector) -> None:
    star_bad = f_bad = ds_bad = 0
    star_n = f_n = ds_n = 0
    examples = {}
    for n in range(1, p["max_n"] + 1):
        for t in enumerate_trees(n):
            nl = _non_leaves(t)
            for k in range(4, n + 1):
                c = count_copies(t, Star(k))
                for x in range(0, nl + 1):
                    star_n += 1
                    if c > tree_star_upper_bound(n, x, k):
                        star_bad += 1
                        examples.setdefault("star", t.edges())
            p4 = count_copies(t, Path(4))
            for s in range(4, longest_path_vertices(t) + 1):
                f_n += 1
                if p4 > f_bound(n, s):
                    f_bad += 1
                    examples.setdefault("f", t.edges())
            for x, y in set(_contained_doublestars(t)):
                if n > x + y + 2:
                    ds_n += 1
                    if p4 < doublestar_p4_lower_bound(x, y, n):
                        ds_bad += 1
                        examples.setdefault("doublestar", t.edges())
    col.cell(star_bad == 0, None, item="star count bound", cases=star_n, violations=star_bad, example=examples.get("star"))
    col.cell(f_bad == 0, None, item="P4 bound for trees with a long path", cases=f_n, violations=f_bad,
             example=examples.get("f"))
    col.cell(ds_bad == 0, None, item="double star P4 bound, n > x+y+2", cases=ds_n, violations=ds_bad,
             example=examples.get("doublestar"))


def check_doublestar_boundary(p: dict, col: _Collector) -> None:
    """At n = x + y + 2 the tree is the double star itself, holding exactly xy copies of P4."""
    for n in range(4, p["max_n"] + 1):
        for x in range(1, (n - 2) // 2 + 1):
            y = n - 2 - x
            t = Graph.double_star(x, y)
            actual = count_copies(t, Path(4))
            stated = doublestar_formula(x, y, n)
            if actual < stated:
                col.findings.append(f"D_{x},{y} on {n} vertices has {actual} copies of P4, formula gives {stated}")
                col.gap = True
            col.cells.append({"n": n, "x": x, "y": y, "actual": actual, "formula": stated, "ok": None
                              if actual < stated else True})
    if not col.gap:
        # the discrepancy is expected; not seeing it means something else changed
        col.cells.append({"item": "boundary discrepancy reproduced", "ok": False})


# -- policy invariants and fuzzing -------------------------------------------------------------------


def minlinear_check(s: int) -> Callable:
    policy = get_policy(f"mini_minlinear_p{s}")

    def check(spec, rec):
        if not policy.bound_ok(rec.final_graph):
            sizes = sorted(popcount(m) for m in component_masks(rec.final_graph))
            return f"component sizes {sizes}"
        return None

    return check


def _t1_ply(spec, graph, memos, mover, move):
    if mover is Player.MAX and memos[Player.MAX].stage == 0 and not t1_shape_ok(graph):
        return "max_t1 stage-1 move left a component outside {K2, C3, C4, K4-e, K4}"
    return None


def _t1_ply_br(spec, graph, memo, mover, move):
    return _t1_ply(spec, graph, {Player.MAX: memo}, mover, move)


def _score_at_most(fn: Callable[[GameSpec], float], what: str) -> Callable:
    def check(spec, rec):
        bound = fn(spec)
        if rec.final_score > bound:
            return f"{what}: score {rec.final_score} > {bound}"
        return None

    return check


def _score_at_least(fn: Callable[[GameSpec], float], what: str) -> Callable:
    def check(spec, rec):
        bound = fn(spec)
        if rec.final_score < bound:
            return f"{what}: score {rec.final_score} < {bound}"
        return None

    return check


def _tree_built(target_fn: Callable[[int], Graph]) -> Callable:
    def check(spec, rec):
        t = target_fn(spec.n)
        return None if contains_tree(rec.final_graph, t) else f"target tree {t.edges()} not built"

    return check


def _max_path_ext(spec):
    if spec.n < 8:
        return 0
    return theorem_p3_closed_form(spec.n, spec.starter) if spec.score == Path(3) else spec.n - 3


# Terminal guarantees asserted during fuzzing (score-based ones only where the stated range applies).
GUARANTEES: dict[str, Callable] = {
    "mini_minlinear_p4": minlinear_check(4),
    "mini_minlinear_p5": minlinear_check(5),
    "mini_minlinear_p6": minlinear_check(6),
    "mini_p4p5": _score_at_most(lambda s: 3 * s.n, "P4 score above 3n"),
    "mini_p6s4": _score_at_most(lambda s: 0, "P6 score"),
    "mini_p5s4": _score_at_most(lambda s: 6, "P5 score"),
    "max_p5s4_second": _score_at_least(lambda s: 5, "P5 score"),
    "max_t1": _score_at_least(lambda s: Fraction(s.n - 4, 3), "triangle score"),
    "mini_t1": _score_at_most(lambda s: Fraction(s.n - 4, 3) + 4, "triangle score"),
    "max_path_extension": _score_at_least(_max_path_ext, "path score"),
    "mini_reduction_345": _score_at_most(lambda s: s.n - 1 if s.n >= 8 else s.n, "P3 score"),
    "mini_matching_extension": _score_at_most(lambda s: s.n - 3, "P4 score"),
    "mini_nonleaf_maker": _score_at_most(lambda s: comb((s.n + 1) // 2, s.score.order - 1), "star score"),
    "max_doublestar": _score_at_least(
        lambda s: doublestar_p4_lower_bound(*balanced_doublestar(s.n), s.n) if s.score == Path(4) else 0, "P4 score"),
    "mini_pathbuilder": _score_at_most(
        lambda s: f_bound(s.n, s.n // 2 + 1) if s.n >= 6 and s.score == Path(4) else float("inf"), "P4 score"),
}

PLY_CHECKS: dict[str, Callable] = {"max_t1": _t1_ply}

# (forbid, score) pairs offered to the fuzzer; each policy plays the ones it applies to
FUZZ_GAMES = (
    ("S4", "P3"), ("S4", "P4"), ("S4", "P5"), ("S4", "P6"),
    ("P4", "P3"), ("P5", "K3"), ("P5", "P4"), ("P5", "P3"), ("P6", "P3"),
    ("cycles", "P4"), ("cycles", "S5"),
)


def fuzz_domain(policy, n_min: int, n_max: int) -> list[tuple[GameSpec, Player]]:
    out = []
    for forbid, score in FUZZ_GAMES:
        for n in range(n_min, n_max + 1):
            for starter in Player:
                spec = _spec(forbid, score, n, starter)
                for side in Player:
                    if policy.applicable(spec, side):
                        out.append((spec, side))
    return out


def fuzz_policy(policy_id: str, n_min: int = 2, n_max: int = 20, games: int = 1000, seed: int = 0,
                forbid: str | None = None, score: str | None = None) -> VerificationReport:
    """Random-adversary games: legality, F-freeness and the policy's invariants."""
    policy = get_policy(policy_id)
    domain = fuzz_domain(policy, n_min, n_max)
    if forbid is not None:
        domain = [(s, side) for s, side in domain if str(s.forbidden) == forbid or
                  (forbid == "cycles" and s.forbidden.pattern is None)]
    if score is not None:
        domain = [(s, side) for s, side in domain if str(s.score) == score]
    col = _Collector()
    params = {"policy": policy_id, "n_min": n_min, "n_max": n_max, "games": games, "seed": seed,
              "forbid": forbid, "score": score}
    rng = random.Random(f"fuzz:{policy_id}:{seed}")
    guarantee = GUARANTEES.get(policy_id)
    ply = PLY_CHECKS.get(policy_id)
    scores: dict[str, list[int]] = {}
    bad = gaps = 0
    if not domain:
        col.cell(False, None, item="no applicable game in range")
    for i in range(games if domain else 0):
        spec, side = rng.choice(domain)
        game_seed = rng.randrange(2**31)
        adversary = get_policy("uniform_random")
        pm, pn = (policy, adversary) if side is Player.MAX else (adversary, policy)
        try:
            rec = play_out(spec, pm, pn, seed=game_seed, on_move=ply)
        except StrategyGap as exc:
            gaps += 1
            if gaps <= 5:
                col.strategy_gap(spec, exc, game=i, n=spec.n)
            continue
        except InvariantViolation as exc:
            bad += 1
            col.cell(False, counterexample(spec, exc.history, str(exc)), game=i, spec=spec.fingerprint(), problem=str(exc))
            continue
        except SatgameError as exc:
            bad += 1
            col.cell(False, None, game=i, spec=spec.fingerprint(), problem=str(exc))
            continue
        problem = guarantee(spec, rec) if guarantee else None
        if problem:
            bad += 1
            col.cell(False, counterexample(spec, rec.moves, problem), game=i, spec=spec.fingerprint(), problem=problem)
        scores.setdefault(spec.fingerprint(), []).append(rec.final_score)
    summary = [{"spec": k, "games": len(v), "min": min(v), "max": max(v)} for k, v in sorted(scores.items())]
    col.cells.append({"item": "games", "played": games, "violations": bad, "gaps": gaps, "ok": bad == 0})
    return VerificationReport(
        check=f"fuzz:{policy_id}",
        params=params,
        claim="policy plays legal moves and keeps its invariants against a random adversary",
        anchor=policy.anchor,
        verdict=col.verdict(),
        computed=col.cells + summary,
        counterexample=col.cx,
        findings=col.findings,
    )


INVARIANT_POLICIES = ("mini_minlinear_p4", "mini_minlinear_p5", "mini_minlinear_p6", "max_t1", "mini_p4p5")


def check_policy_invariants(p: dict, col: _Collector) -> None:
    mn = p["max_nodes"]
    for s in (4, 5, 6):
        pid = f"mini_minlinear_p{s}"
        policy = get_policy(pid)
        for n in range(2, p["max_n"] + 1):
            for st in Player:
                spec = _spec(f"P{s}", "P3", n, st)
                r = _policy_br(col, spec, pid, Player.MINI, mn,
                               score_fn=lambda g, policy=policy: 0 if policy.bound_ok(g) else 1, adversary="max")
                if r is not None:
                    col.cell(r.value == 0, counterexample(spec, r.line, "component bound violated"),
                             policy=pid, n=n, starter=st.value, mode="exhaustive")
    for n in range(2, p["max_n"] + 1):
        for st in Player:
            spec = _spec("P5", "K3", n, st)
            try:
                r = best_response(spec, get_policy("max_t1"), Player.MAX, score_fn=lambda g: 0,
                                  ply_check=_t1_ply_br, max_nodes=mn)
                col.nodes += r.nodes_expanded
                col.cell(True, policy="max_t1", n=n, starter=st.value, mode="exhaustive")
            except InvariantViolation as exc:
                col.cell(False, counterexample(spec, exc.history, str(exc)), policy="max_t1", n=n,
                         starter=st.value, mode="exhaustive")
            except StrategyGap as exc:
                col.strategy_gap(spec, exc, policy="max_t1", n=n)
            spec = _spec("P5", "P4", n, st)
            r = _policy_br(col, spec, "mini_p4p5", Player.MINI, mn)
            if r is not None:
                col.cell(r.value <= 3 * n, counterexample(spec, r.line, f"score {r.value}"),
                         policy="mini_p4p5", n=n, starter=st.value, value=r.value, bound=f"<={3 * n}", mode="exhaustive")
    for pid in INVARIANT_POLICIES:
        rep = fuzz_policy(pid, 2, p["fuzz_max_n"], p["games"], p["seed"])
        if rep.verdict == "gap":
            col.gap = True
            col.findings += rep.findings
            col.cx = col.cx or rep.counterexample
        violations = next(c["violations"] for c in rep.computed if c.get("item") == "games")
        col.cell(rep.verdict != "fail", rep.counterexample, policy=pid, mode="random", games=p["games"],
                 violations=violations)


def check_policy_fuzz(p: dict, col: _Collector) -> None:
    for pid in policy_ids():
        rep = fuzz_policy(pid, 2, p["max_n"], p["games"], p["seed"])
        if rep.verdict == "gap":
            col.gap = True
            col.findings += rep.findings
            col.cx = col.cx or rep.counterexample
        violations = next(c["violations"] for c in rep.computed if c.get("item") == "games")
        col.cell(rep.verdict != "fail", rep.counterexample, policy=pid, games=p["games"], violations=violations)


def check_counterexample_replay(rep: VerificationReport) -> bool:
    """Fail and gap reports must carry a prefix that replays to a legal position."""
    if rep.verdict not in ("fail", "gap") or rep.counterexample is None:
        return True
    try:
        replay_counterexample(rep.counterexample)
    except SatgameError:
        return False
    return True


# -- catalog ------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckInfo:
    check_id: str
    criterion: int
    claim: str
    anchor: str
    run: Callable[[dict, _Collector], None]
    desk: dict
    quick: dict


_NODES = {"max_nodes": 10**7}

CHECKS: dict[str, CheckInfo] = {
    c.check_id: c
    for c in [
        CheckInfo("table1", 1, "exact P3 scores of S4-free games for n <= 12", "published P3 table",
                  check_table1, {"max_n": 12}, {"max_n": 12}),
        CheckInfo("p3-parity", 2, "P3 score is n or n-1 by parity for n >= 8", "P3 parity formula",
                  check_p3_parity, {"min_n": 8, "max_n": 64}, {"min_n": 8, "max_n": 24}),
        CheckInfo("concrete-abstract", 3, "graph solver equals counter abstraction on every reachable state",
                  "counter abstraction of S4-free games", check_concrete_abstract,
                  {"max_n": 8, "scorings": ["P3", "P4"], **_NODES}, {"max_n": 6, "scorings": ["P3", "P4"], **_NODES}),
        CheckInfo("p4-table", 4, "P4 deficits: published cells, -3 floor, matching case, P4 <= P3",
                  "published P4 table and its lemmas", check_p4_table, {"max_n": 40}, {"max_n": 20}),
        CheckInfo("p5s4-upper", 5, "P5 score of S4-free games is at most 6", "P5 upper bound in S4-free games",
                  check_p5s4_upper, {"max_n": 9, **_NODES}, {"max_n": 7, **_NODES}),
        CheckInfo("p5s4-lower", 5, "P5 score is at least 5 when Mini starts, n = 4k (k >= 2) or 4k+1 (k >= 1)",
                  "P5 lower bound in S4-free games", check_p5s4_lower, {"max_n": 9, **_NODES}, {"max_n": 8, **_NODES}),
        CheckInfo("p6s4-zero", 5, "P6 score of S4-free games is 0", "P6 score in S4-free games",
                  check_p6s4_zero, {"max_n": 9, **_NODES}, {"max_n": 7, **_NODES}),
        CheckInfo("s4-policies", 2, "S4 strategies meet the P3 and P4 values they are built for",
                  "S4 strategies for path scores", check_s4_policies,
                  {"max_n": 14, "max_n_matching": 19, **_NODES}, {"max_n": 10, "max_n_matching": 11, **_NODES}),
        CheckInfo("t1-bounds", 6, "(n-4)/3 <= triangle score <= (n-4)/3 + 4 in P5-free games",
                  "triangle score of P5-free games", check_t1_bounds,
                  {"min_n": 5, "max_n": 9, **_NODES}, {"min_n": 5, "max_n": 7, **_NODES}),
        CheckInfo("t1-policies", 6, "max_t1 and mini_t1 secure their triangle bounds against any opponent",
                  "triangle strategies in P5-free games", check_t1_policies,
                  {"min_n": 5, "max_n": 8, **_NODES}, {"min_n": 5, "max_n": 7, **_NODES}),
        CheckInfo("t2-bounds", 7, "C(floor(n/2), k-1) <= star score <= C(ceil(n/2), k-1) in cycle-free games",
                  "star score of cycle-free games", check_t2_bounds,
                  {"ks": [5], "min_n": 8, "max_n": 10, **_NODES}, {"ks": [5], "min_n": 8, "max_n": 9, **_NODES}),
        CheckInfo("treebuilder", 7, "every tree on floor(n/2)+1 vertices can be built",
                  "greedy tree embedding in cycle-free games", check_treebuilder,
                  {"min_n": 2, "max_n": 8, **_NODES}, {"min_n": 2, "max_n": 6, **_NODES}),
        CheckInfo("t3-policies", 8, "double star lower bound and long-path upper bound on the P4 score",
                  "P4 score of cycle-free games", check_t3_policies,
                  {"min_n": 6, "max_n": 9, **_NODES}, {"min_n": 6, "max_n": 8, **_NODES}),
        CheckInfo("counting-oracle", 9, "count_copies equals embedding counts; star degree identity",
                  "unlabeled copy counting", check_counting_oracle,
                  {"graphs": 500, "max_n": 8, "seed": 2024}, {"graphs": 100, "max_n": 7, "seed": 2024}),
        CheckInfo("policy-invariants", 10, "bounded components, max_t1 shape invariant, mini_p4p5 score <= 3n",
                  "policy invariants", check_policy_invariants,
                  {"max_n": 9, "fuzz_max_n": 20, "games": 1000, "seed": 7, **_NODES},
                  {"max_n": 7, "fuzz_max_n": 14, "games": 100, "seed": 7, **_NODES}),
        CheckInfo("policy-fuzz", 10, "every policy plays legal moves within its applicability range",
                  "policy legality", check_policy_fuzz,
                  {"max_n": 20, "games": 600, "seed": 7}, {"max_n": 12, "games": 40, "seed": 7}),
        CheckInfo("tree-lemmas", 11, "star, long-path and double star bounds over all trees",
                  "tree counting lemmas", check_tree_lemmas, {"max_n": 9}, {"max_n": 8}),
        CheckInfo("doublestar-boundary", 11, "double star bound at n = x + y + 2",
                  "double star lemma boundary", check_doublestar_boundary, {"max_n": 9}, {"max_n": 9}),
    ]
}

BUDGET_LEVELS = ("desk", "quick")


def check_ids() -> list[str]:
    return list(CHECKS)


def default_params(check_id: str, budget_level: str = "desk") -> dict:
    info = _info(check_id)
    if budget_level not in BUDGET_LEVELS:
        raise SatgameError(f"budget level must be one of {BUDGET_LEVELS}")
    return dict(info.desk if budget_level == "desk" else info.quick)


def _info(check_id: str) -> CheckInfo:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise SatgameError(f"unknown check {check_id!r}; known: {', '.join(CHECKS)}") from None


def run_check(check_id: str, params: dict | None = None, budget_level: str = "desk") -> VerificationReport:
    info = _info(check_id)
    p = default_params(check_id, budget_level)
    p.update(params or {})
    if "max_nodes" in p and p["max_nodes"] is None:
        p["max_nodes"] = default_budget()
    col = _Collector()
    verdict = None
    try:
        info.run(p, col)
    except BudgetExceeded as exc:
        verdict = "budget"
        col.findings.append(str(exc))
    return VerificationReport(
        check=check_id,
        params=p,
        claim=info.claim,
        anchor=info.anchor,
        verdict=verdict or col.verdict(),
        computed=col.cells,
        counterexample=col.cx,
        findings=col.findings,
        stats={"nodes_expanded": col.nodes, "criterion": info.criterion},
    )


def _run_one(args) -> VerificationReport:
    return run_check(*args)


def run_checks(ids: list[str], budget_level: str = "desk", threads: int = 1) -> list[VerificationReport]:
    """Independent checks, optionally in parallel; results in the order of ``ids``."""
    jobs = [(cid, None, budget_level) for cid in ids]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
