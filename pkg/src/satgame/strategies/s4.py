"""Policies for S_4-free games (maximum degree two) scored by paths."""

from __future__ import annotations

from dataclasses import replace

from ..engine import GameSpec, Player
from ..graph import Graph, component_of
from ..patterns import Path, Star
from .base import Memo, Policy
from .common import abstract_optimal, close_path, end_joins, least_legal
from .shapes import C3, K2, P3, P4, component_list, is_cycle_shape, isolated_vertices, path_ends

_S4 = Star(4)


def _is_s4(spec: GameSpec) -> bool:
    return spec.forbidden.pattern == _S4


def _paths(g: Graph):
    """Non-cycle components with at least one edge."""
    return [c for c in component_list(g) if c.size >= 2 and not is_cycle_shape(c.kind)]


def _extensions(g: Graph, mask: int, iso: list[int]) -> list[tuple[int, int]]:
    return [(min(a, v), max(a, v)) for a in path_ends(g, mask) for v in iso]


def _vv(iso: list[int]) -> list[tuple[int, int]]:
    return [(iso[0], iso[1])] if len(iso) >= 2 else []


class MaxPathExtension(Policy):
    policy_id = "max_path_extension"
    summary = "Max keeps one path plus cycles; switches to the optimal endgame below 7 isolated vertices."
    anchor = "path extension strategy for Max in S4-free games scored by P3"

    def applicable(self, spec, side):
        return _is_s4(spec) and spec.score in (Path(3), Path(4)) and side is Player.MAX

    def applicability(self):
        return "F=S4, H in {P3, P4}, side Max; guarantee for n >= 8"

    def decide(self, spec, g, memo, legal):
        iso = isolated_vertices(g)
        if len(iso) < 7:
            return abstract_optimal(self, spec, g, memo, legal, maximize=True), memo
        paths = _paths(g)
        if not paths:
            return self.pick(g, memo, _vv(iso)), memo
        if len(paths) == 1:
            return self.pick(g, memo, _extensions(g, paths[0].mask, iso)), memo
        if len(paths) == 2 and any(p.kind == K2 for p in paths):
            return self.pick(g, memo, end_joins(g, paths[0].mask, paths[1].mask)), memo
        raise self.gap(f"{len(paths)} path components at Max's turn")


class MiniReduction345(Policy):
    policy_id = "mini_reduction_345"
    summary = "Mini completes a short path and closes it, shrinking the game by 3, 4 or 5 vertices per round."
    anchor = "reduction by 3, 4 or 5 vertices for Mini in S4-free games scored by P3"
    endgame = 12

    def applicable(self, spec, side):
        return (
            _is_s4(spec)
            and spec.score == Path(3)
            and side is Player.MINI
            and (spec.n + spec.starter.index) % 2 == 0
        )

    def applicability(self):
        return "F=S4, H=P3, side Mini, n and starter index of equal parity; guarantee for n >= 8"

    def decide(self, spec, g, memo, legal):
        comps = component_list(g)
        open_vertices = sum(c.size for c in comps if not is_cycle_shape(c.kind))
        if open_vertices <= self.endgame:
            # the remaining game is one of the small base cases; play it optimally
            return abstract_optimal(self, spec, g, memo, legal, maximize=False), memo
        iso = isolated_vertices(g)
        paths = [c for c in comps if c.size >= 2 and not is_cycle_shape(c.kind)]
        long = [c for c in paths if c.size >= 4]
        if long:
            return self.pick(g, memo, [close_path(g, c.mask) for c in long]), memo
        p3 = [c for c in paths if c.kind == P3]
        edges = [c for c in paths if c.kind == K2]
        if p3 and edges:
            return self.pick(g, memo, [close_path(g, c.mask) for c in p3]), memo
        if len(p3) == 1 and not edges and iso:
            return self.pick(g, memo, _extensions(g, p3[0].mask, iso)), memo
        if len(edges) >= 2 and not p3:
            return self.pick(g, memo, end_joins(g, edges[0].mask, edges[1].mask)), memo
        if len(edges) == 1 and not p3 and iso:
            return self.pick(g, memo, _extensions(g, edges[0].mask, iso)), memo
        if not paths and len(iso) >= 2:
            return self.pick(g, memo, _vv(iso)), memo
        raise self.gap("position outside the reduction rounds")


class MiniMatchingExtension(Policy):
    policy_id = "mini_matching_extension"
    summary = "Mini plays isolated edges, closes any P3 to a triangle and any P4 to a C4."
    anchor = "matching extension for Mini in S4-free games scored by P4"

    def applicable(self, spec, side):
        return (
            _is_s4(spec)
            and spec.score == Path(4)
            and side is Player.MINI
            and spec.starter is Player.MINI
            and spec.n % 4 == 3
        )

    def applicability(self):
        return "F=S4, H=P4, side Mini, Mini starts, n = 4l+3"

    def decide(self, spec, g, memo, legal):
        comps = component_list(g)
        for kind in (P3, P4):
            found = [c for c in comps if c.kind == kind]
            if found:
                return self.pick(g, memo, [close_path(g, c.mask) for c in found]), memo
        iso = isolated_vertices(g)
        if len(iso) >= 2:
            return self.pick(g, memo, _vv(iso)), memo
        if any(c.kind == C3 for c in comps):
            # the triangle is secured; the rest of the game cannot undo it
            return least_legal(self, g, memo, legal), memo
        raise self.gap("no isolated edge left and no triangle yet")


class MiniP5S4(Policy):
    policy_id = "mini_p5s4"
    summary = "Mini's two-stage strategy holding the P5-score of S4-free games to at most 6."
    anchor = "two-stage Mini strategy for S4-free games scored by P5"
    AFTER_JOIN = 5

    def applicable(self, spec, side):
        return _is_s4(spec) and spec.score == Path(5) and side is Player.MINI

    def applicability(self):
        return "F=S4, H=P5, side Mini, either starter"

    def decide(self, spec, g, memo, legal):
        iso = isolated_vertices(g)
        paths = _paths(g)
        if iso and memo.stage == 0:
            short = [c for c in paths if c.kind in (P3, P4)]
            if short:
                return self.pick(g, memo, [close_path(g, c.mask) for c in short]), memo
            if paths and all(c.kind == K2 for c in paths):
                if len(iso) >= 2:
                    return self.pick(g, memo, _vv(iso)), memo
                return self.pick(g, memo, [m for c in paths for m in _extensions(g, c.mask, iso)]), memo
            if not paths and len(iso) >= 2:
                return self.pick(g, memo, _vv(iso)), memo
            raise self.gap("stage 1 position outside the three rules")
        stage = max(memo.stage, 1)
        orders = sorted(c.size for c in paths if c.size >= 3)
        edges = [c for c in paths if c.kind == K2]
        if stage == self.AFTER_JOIN and orders:
            longs = [c for c in paths if c.size >= 3]
            return self.pick(g, memo, [close_path(g, c.mask) for c in longs]), replace(memo, stage=stage)
        target = {(3, 4): 4, (3,): 3, (4,): 4, (5,): 5}.get(tuple(orders))
        if target is not None:
            found = [c for c in paths if c.size == target]
            return self.pick(g, memo, [close_path(g, c.mask) for c in found]), replace(memo, stage=stage)
        if not orders and len(edges) >= 2:
            moves = [m for i, a in enumerate(edges) for b in edges[i + 1 :] for m in end_joins(g, a.mask, b.mask)]
            return self.pick(g, memo, moves), replace(memo, stage=self.AFTER_JOIN)
        raise self.gap(f"stage 2 with paths {orders} outside the five cases")


class MaxP5S4Second(Policy):
    policy_id = "max_p5s4_second"
    summary = "Max as second player forces a cycle on at least 5 vertices."
    anchor = "second-player Max strategy for S4-free games scored by P5"
    uses_last = True

    def applicable(self, spec, side):
        n = spec.n
        return (
            _is_s4(spec)
            and spec.score == Path(5)
            and side is Player.MAX
            and spec.starter is Player.MINI
            and ((n % 4 == 0 and n >= 8) or (n % 4 == 1 and n >= 5))
        )

    def applicability(self):
        return "F=S4, H=P5, side Max, Mini starts, n = 4k with k >= 2 or n = 4k+1 with k >= 1"

    def decide(self, spec, g, memo, legal):
        comps = component_list(g)
        cycles = [c for c in comps if is_cycle_shape(c.kind)]
        if any(c.size >= 5 for c in cycles):
            return least_legal(self, g, memo, legal), memo
        if cycles:
            raise self.gap("a short cycle appeared before any long one")
        long = [c for c in comps if c.size >= 5 and not is_cycle_shape(c.kind)]
        if long:
            return self.pick(g, memo, [close_path(g, c.mask) for c in long]), memo
        if memo.last is None:
            raise self.gap("Max to move without a previous Mini move")
        iso = isolated_vertices(g)
        played = component_of(g, memo.last[0])
        k = bin(played).count("1")
        if k == 2:
            if len(iso) >= 2:
                return self.pick(g, memo, _vv(iso)), memo
            raise self.gap("cannot mirror an isolated edge")
        if k >= 3:
            edges = [c for c in comps if c.kind == K2]
            if edges:
                return self.pick(g, memo, [m for c in edges for m in end_joins(g, played, c.mask)]), memo
            if iso:
                return self.pick(g, memo, _extensions(g, played, iso)), memo
            raise self.gap("nothing left to feed the path")
        raise self.gap("unexpected Mini move")


class MiniP6S4(Policy):
    policy_id = "mini_p6s4"
    summary = "Mini closes every path on 3 to 5 vertices, so no cycle longer than 5 appears."
    anchor = "four-rule Mini strategy for S4-free games scored by P6"

    def applicable(self, spec, side):
        return _is_s4(spec) and spec.score == Path(6) and side is Player.MINI

    def applicability(self):
        return "F=S4, H=P6, side Mini, either starter"

    def decide(self, spec, g, memo, legal):
        paths = _paths(g)
        short = [c for c in paths if 3 <= c.size <= 5]
        if short:
            return self.pick(g, memo, [close_path(g, c.mask) for c in short]), memo
        iso = isolated_vertices(g)
        kinds = sorted(c.kind for c in paths)
        if kinds == [K2, K2]:
            return self.pick(g, memo, end_joins(g, paths[0].mask, paths[1].mask)), memo
        if kinds == [K2] and iso:
            return self.pick(g, memo, _extensions(g, paths[0].mask, iso)), memo
        if not kinds and len(iso) >= 2:
            return self.pick(g, memo, _vv(iso)), memo
        raise self.gap(f"components {kinds} outside the four rules")
