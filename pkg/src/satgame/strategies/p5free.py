"""Policies for path-free games: triangles and P4s in P5-free play, bounded components."""

from __future__ import annotations

from dataclasses import replace

from ..engine import Player
from ..graph import Graph, bits, component_of, popcount
from ..patterns import Path, Triangle
from .base import Memo, Policy
from .common import close_path, cross_moves, inner_non_edges, least_legal
from .shapes import (
    C3,
    C4,
    G41,
    K2,
    K4,
    K4_MINUS_E,
    P3,
    P4,
    component_list,
    is_clique,
    is_hamiltonian,
    isolated_vertices,
)

STAGE2 = 1
GOOD = (C4, K4_MINUS_E, K4)  # four-vertex components already holding a C4


def _p5free(spec) -> bool:
    return spec.forbidden.pattern == Path(5)


def _deg(g: Graph, v: int) -> int:
    return popcount(g.rows[v])


def _legal_only(moves, legal):
    ok = set(legal)
    return [m for m in moves if m in ok]


class MaxT1(Policy):
    policy_id = "max_t1"
    summary = "Max answers inside Mini's component to grow triangles and C4s, pairing isolated vertices otherwise."
    anchor = "Max strategy for P5-free games scored by triangles"
    uses_last = True

    def applicable(self, spec, side):
        return _p5free(spec) and spec.score == Triangle() and side is Player.MAX

    def applicability(self):
        return "F=P5, H=K3, side Max, either starter"

    def decide(self, spec, g, memo, legal):
        if memo.stage == STAGE2:
            return least_legal(self, g, memo, legal), memo
        iso = isolated_vertices(g)
        stage2 = replace(memo, stage=STAGE2)
        if not iso:
            return least_legal(self, g, stage2, legal), stage2
        if memo.last is None:
            if g.num_edges:
                raise self.gap("Max to move without a recorded Mini move")
            return self.pick(g, memo, [(iso[0], iso[1])]), memo
        comp = component_of(g, memo.last[0])
        k = popcount(comp)
        comps = component_list(g)
        if k == 2:
            if len(iso) >= 2:
                return self.pick(g, memo, [(iso[0], iso[1])]), memo
            return self.pick(g, memo, cross_moves(g, comp, 1 << iso[0])), stage2
        if k == 3:
            if edges_of(g, comp) == 2:
                return self.pick(g, memo, [close_path(g, comp)]), memo
            raise self.gap("Mini's move produced a triangle")
        if k == 4:
            shape = next(c for c in comps if c.mask == comp).kind
            if shape == P4:
                return self.pick(g, memo, [close_path(g, comp)]), memo
            inner = _legal_only(inner_non_edges(g, comp), legal)
            if inner:
                return self.pick(g, memo, inner), memo
            if len(iso) >= 2:
                return self.pick(g, memo, [(iso[0], iso[1])]), memo
            targets = [c.mask for c in comps if c.kind in (K2, C3)]
            if len(iso) == 1 and targets:
                moves = [m for t in targets for m in cross_moves(g, 1 << iso[0], t)]
                return self.pick(g, memo, moves), stage2
            return least_legal(self, g, stage2, legal), stage2
        raise self.gap(f"Mini's move left a component on {k} vertices")


def edges_of(g: Graph, mask: int) -> int:
    return sum(popcount(g.rows[v] & mask) for v in bits(mask)) // 2


def t1_shape_ok(g: Graph) -> bool:
    """Every nontrivial component is K2, C3, C4, K4-e or K4."""
    allowed = {K2, C3, C4, K4_MINUS_E, K4, "K1"}
    return all(c.kind in allowed for c in component_list(g))


class MiniT1(Policy):
    policy_id = "mini_t1"
    summary = "Mini hangs isolated vertices on Max's small components so that few triangles can form."
    anchor = "Mini strategy for P5-free games scored by triangles"

    def applicable(self, spec, side):
        return _p5free(spec) and spec.score == Triangle() and side is Player.MINI

    def applicability(self):
        return "F=P5, H=K3, side Mini, either starter"

    def decide(self, spec, g, memo, legal):
        if memo.stage == STAGE2:
            return least_legal(self, g, memo, legal), memo
        iso = isolated_vertices(g)
        stage2 = replace(memo, stage=STAGE2)
        if not iso:
            return least_legal(self, g, stage2, legal), stage2
        comps = component_list(g)
        fours = [c for c in comps if c.size == 4]
        if fours:
            moves = []
            for c in fours:
                top = max(_deg(g, v) for v in bits(c.mask))
                moves += [(v, iso[0]) for v in bits(c.mask) if _deg(g, v) == top]
            moves = _legal_only([(min(m), max(m)) for m in moves], legal)
            if not moves:
                raise self.gap("four-vertex component cannot take a pendant vertex")
            return self.pick(g, memo, moves), memo
        edges = [c for c in comps if c.kind == K2]
        if edges:
            return self.pick(g, memo, [m for c in edges for m in cross_moves(g, c.mask, 1 << iso[0])]), memo
        if len(iso) >= 2:
            return self.pick(g, memo, [(iso[0], iso[1])]), memo
        return least_legal(self, g, stage2, legal), stage2


class MiniP4P5(Policy):
    policy_id = "mini_p4p5"
    summary = "Mini turns P3s into triangles and four-vertex components into C4-holders, pairing isolated vertices."
    anchor = "Mini strategy for P5-free games scored by P4"

    def applicable(self, spec, side):
        return _p5free(spec) and spec.score == Path(4) and side is Player.MINI

    def applicability(self):
        return "F=P5, H=P4, side Mini, either starter"

    def decide(self, spec, g, memo, legal):
        if memo.stage == STAGE2:
            return least_legal(self, g, memo, legal), memo
        comps = component_list(g)
        for kind in (P3, P4):
            found = [c for c in comps if c.kind == kind]
            if found:
                return self.pick(g, memo, [close_path(g, c.mask) for c in found]), memo
        g41 = [c for c in comps if c.kind == G41]
        if g41:
            # the pendant vertex joins a triangle vertex it is not attached to
            moves = [
                m for c in g41 for m in _legal_only(inner_non_edges(g, c.mask), legal)
                if _deg(g, m[0]) == 1 or _deg(g, m[1]) == 1
            ]
            return self.pick(g, memo, moves), memo
        if any(c.kind not in ("K1", K2, C3) + GOOD for c in comps):
            raise self.gap("a component outside the case analysis")
        iso = isolated_vertices(g)
        if len(iso) >= 2:
            return self.pick(g, memo, [(iso[0], iso[1])]), memo
        stage2 = replace(memo, stage=STAGE2)
        targets = [c.mask for c in comps if c.kind in (K2, C3)]
        if iso and targets:
            moves = [m for t in targets for m in cross_moves(g, 1 << iso[0], t)]
            return self.pick(g, memo, _legal_only(moves, legal)), stage2
        return least_legal(self, g, stage2, legal), stage2


# -- bounded components -----------------------------------------------------------------------


def _spider_legs(g: Graph, mask: int) -> tuple[int, list[list[int]]] | None:
    """Centre and legs (vertex lists from the centre outwards) of a spider tree with one branch vertex."""
    if edges_of(g, mask) != popcount(mask) - 1:
        return None
    hubs = [v for v in bits(mask) if _deg(g, v) >= 3]
    if len(hubs) != 1 or any(_deg(g, v) > 2 for v in bits(mask) if v != hubs[0]):
        return None
    c = hubs[0]
    legs = []
    for w in bits(g.rows[c]):
        leg, prev = [w], c
        while _deg(g, leg[-1]) == 2:
            nxt = next(x for x in bits(g.rows[leg[-1]]) if x != prev)
            prev = leg[-1]
            leg.append(nxt)
        legs.append(leg)
    return c, sorted(legs, key=len)


class MiniMinLinear(Policy):
    """Keep every component Hamiltonian (or tiny), so components stay small."""

    summary = "Mini keeps components Hamiltonian and pairs internal edges, bounding component size."
    anchor = "bounded-component strategy for Mini in P_s-free games"
    uses_last = True

    def __init__(self, s: int):
        if s not in (4, 5, 6):
            raise ValueError("bounded-component strategy covers s = 4, 5, 6")
        self.s = s
        self.policy_id = f"mini_minlinear_p{s}"

    def applicable(self, spec, side):
        return spec.forbidden.pattern == Path(self.s) and side is Player.MINI

    def applicability(self):
        return f"F=P{self.s}, any H, side Mini, either starter"

    def bound_ok(self, g: Graph) -> bool:
        sizes = sorted(popcount(m) for m in (c.mask for c in component_list(g)))
        if self.s == 4:
            return sizes[-1] <= 3
        if self.s == 5:
            return sizes[-1] <= 5 and (len(sizes) < 2 or sizes[-2] <= 4)
        return sizes[-1] <= 6

    def _repairs(self, g, mask, legal):
        moves = _legal_only(inner_non_edges(g, mask), legal)
        return [m for m in moves if is_hamiltonian(g.add_edge(*m), mask)]

    def _block(self, g: Graph, mask: int):
        """The prescribed answer when Max builds one of the tree shapes of the second phase."""
        k = popcount(mask)
        m = edges_of(g, mask)
        if m == k - 1:
            sp = _spider_legs(g, mask)
            if sp is None:
                return None
            c, legs = sp
            lens = [len(x) for x in legs]
            if lens == [1, 1, 2]:
                far = legs[2][1]
                if self.s == 5:
                    return [(c, far)]
                if self.s == 6:
                    return [(far, legs[0][0]), (far, legs[1][0])]
            if lens == [1, 2, 2] and self.s == 6:
                return [(legs[1][0], legs[2][0])]
            return None
        if self.s == 6 and k == 6 and m == 6:
            # a P3 hung by its middle vertex on a triangle
            hubs = [v for v in bits(mask) if _deg(g, v) == 3]
            for v in hubs:
                leaves = [w for w in bits(g.rows[v]) if _deg(g, w) == 1]
                if len(leaves) == 2:
                    x = next(w for w in bits(g.rows[v]) if _deg(g, w) == 3)
                    return [(v, y) for y in bits(g.rows[x] & ~(1 << v))]
        return None

    def decide(self, spec, g, memo, legal):
        comps = component_list(g)
        if memo.last is not None:
            last = component_of(g, memo.last[0])
            if not is_hamiltonian(g, last):
                fix = self._repairs(g, last, legal)
                if fix:
                    return self.pick(g, memo, fix), memo
                if not _was_internal(g, memo.last):
                    # Max joined two components and no single edge restores a Hamiltonian cycle
                    if memo.stage == STAGE2:
                        block = self._block(g, last)
                        if block:
                            moves = _legal_only([(min(m), max(m)) for m in block], legal)
                            return self.pick(g, memo, moves), memo
                    raise self.gap("Max's component can be neither repaired nor blocked")
        if memo.stage != STAGE2:
            broken = [c for c in comps if not is_hamiltonian(g, c.mask)]
            if broken:
                fix = [m for c in broken for m in self._repairs(g, c.mask, legal)]
                if fix:
                    return self.pick(g, memo, fix), memo
                raise self.gap("a non-Hamiltonian component in the first phase")
            inner = [m for c in comps if not is_clique(g, c.mask) for m in _legal_only(inner_non_edges(g, c.mask), legal)]
            if inner:
                return self.pick(g, memo, inner), memo
            iso = isolated_vertices(g)
            if len(iso) >= 2:
                return self.pick(g, memo, [(iso[0], iso[1])]), memo
            memo = replace(memo, stage=STAGE2)
        return self._phase2(spec, g, memo, legal, comps)

    def _phase2(self, spec, g, memo, legal, comps):
        if memo.last is not None and _was_internal(g, memo.last):
            # Max played inside a component: answer inside one as well
            inner = [m for c in comps for m in _legal_only(inner_non_edges(g, c.mask), legal)]
            if inner:
                return self.pick(g, memo, inner), memo
        by_comp = {}
        for c in comps:
            for v in bits(c.mask):
                by_comp[v] = c
        cross = [m for m in legal if by_comp[m[0]].mask != by_comp[m[1]].mask]
        if self.s == 4:
            iso = [c for c in comps if c.size == 1]
            edges = [c for c in comps if c.kind == K2]
            moves = [m for m in cross if {by_comp[m[0]].size, by_comp[m[1]].size} == {1, 2}]
            if iso and edges and moves:
                return self.pick(g, memo, moves), memo
            raise self.gap("second phase without an isolated vertex and an isolated edge")
        if not cross:
            return least_legal(self, g, memo, legal), memo
        best = min(by_comp[m[0]].size + by_comp[m[1]].size for m in cross)
        moves = [m for m in cross if by_comp[m[0]].size + by_comp[m[1]].size == best]
        return self.pick(g, memo, moves), memo


def _was_internal(g: Graph, move: tuple[int, int]) -> bool:
    """Whether ``move`` (already in ``g``) joined two vertices that were connected before."""
    u, v = move
    rows = list(g.rows)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    return bool(component_of(Graph(g.n, rows), u) >> v & 1)
