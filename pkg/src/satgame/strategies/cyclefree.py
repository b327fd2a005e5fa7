"""Policies for games where every cycle is forbidden, so the game ends in a spanning tree."""

from __future__ import annotations

from collections import deque
from dataclasses import replace
from typing import Callable

from ..engine import Player
from ..graph import Graph, bits, component_of
from ..patterns import Forbidden
from .base import Memo, Policy, reduce_isolated
from .common import least_legal
from .shapes import isolated_vertices

DONE = 1


def _cycle_free(spec) -> bool:
    return spec.forbidden == Forbidden(None)


def bfs_layout(tree: Graph) -> tuple[list[int], list[int]]:
    """BFS order of ``tree`` from vertex 0 and the parent (as an order index) of each entry."""
    order = [0]
    parent = [-1]
    index = {0: 0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in bits(tree.rows[u]):
            if w not in index:
                index[w] = len(order)
                order.append(w)
                parent.append(index[u])
                queue.append(w)
    if len(order) != tree.n:
        raise ValueError("target must be a tree")
    return order, parent


class TreeBuilder(Policy):
    """Embed a target tree one vertex at a time.

    ``roles[i]`` is the graph vertex playing the i-th tree vertex in BFS
    order.  Each move hangs the next tree vertex off its parent's image,
    using any vertex outside the parent's component; the rest of that
    component just comes along for the ride.
    """

    summary = "Builds a target tree vertex by vertex, attaching a vertex of a foreign component each move."
    anchor = "greedy tree embedding in the cycle-free game"

    def __init__(self, target: Graph | Callable[[int], Graph], policy_id: str = "treebuilder", side: Player | None = None):
        self._target = target
        self.policy_id = policy_id
        self.side = side
        self._layouts: dict[int, tuple[list[int], list[int]]] = {}

    def target(self, n: int) -> Graph:
        return self._target(n) if callable(self._target) else self._target

    def layout(self, n: int):
        if n not in self._layouts:
            self._layouts[n] = bfs_layout(self.target(n))
        return self._layouts[n]

    def applicable(self, spec, side):
        if not _cycle_free(spec) or (self.side is not None and side is not self.side):
            return False
        try:
            t = self.target(spec.n)
        except ValueError:
            return False
        return t.n <= spec.n // 2 + 1

    def applicability(self):
        who = "either side" if self.side is None else f"side {self.side.value}"
        return f"F=cycles, {who}, target tree on at most floor(n/2)+1 vertices"

    def after_opponent(self, spec, before, move, memo):
        if not memo.roles and before.num_edges == 0 and memo.stage != DONE:
            # the opponent's opening edge already is the first tree edge
            return self._start(memo, move, len(self.layout(spec.n)[0]))
        return memo

    def decide(self, spec, g, memo, legal):
        if memo.stage == DONE:
            return least_legal(self, g, memo, legal), memo
        order, parent = self.layout(spec.n)
        k = len(order)
        if k <= 1:
            done = Memo(memo.side, DONE, seed=memo.seed)
            return least_legal(self, g, done, legal), done
        if not memo.roles:
            if g.num_edges:
                raise self.gap("builder lost track of the opening edge")
            moves = reduce_isolated(g, memo, self, legal)
            move = self.pick(g, memo, moves, memo_after=lambda m: self._start(memo, m, k))
            return move, self._start(memo, move, k)
        j = len(memo.roles)
        u = memo.roles[parent[j]]
        comp = component_of(g, u)
        iso = isolated_vertices(g)
        spare = set(iso[2:])
        cands = [(u, w) for w in range(g.n) if not comp >> w & 1 and w not in spare]
        if not cands:
            raise self.gap("no vertex outside the component to attach")

        def after(move):
            w = move[0] if move[1] == u else move[1]
            return self._advance(memo, w, k)

        move = self.pick(g, memo, cands, memo_after=after)
        w = move[0] if move[1] == u else move[1]
        return move, self._advance(memo, w, k)

    def _start(self, memo: Memo, move: tuple[int, int], k: int) -> Memo:
        if k <= 2:
            return Memo(memo.side, DONE, seed=memo.seed)
        return replace(memo, roles=tuple(move))

    def _advance(self, memo: Memo, w: int, k: int) -> Memo:
        roles = memo.roles + (w,)
        if len(roles) == k:
            return Memo(memo.side, DONE, seed=memo.seed)
        return replace(memo, roles=roles)


def balanced_doublestar(n: int) -> tuple[int, int]:
    """Leaf counts of the double star Max aims for: x + y = floor((n-2)/2), |x - y| <= 1."""
    t = (n - 2) // 2
    return t // 2, t - t // 2


def _doublestar_target(n: int) -> Graph:
    if n < 6:
        raise ValueError("the double star strategy needs n >= 6")
    x, y = balanced_doublestar(n)
    return Graph.double_star(x, y, x + y + 2)


def _path_target(n: int) -> Graph:
    return Graph.path(n // 2 + 1)


def max_doublestar() -> TreeBuilder:
    p = TreeBuilder(_doublestar_target, "max_doublestar", Player.MAX)
    p.summary = "Max builds a balanced double star on floor(n/2)+1 vertices, maximising P4 copies."
    p.anchor = "balanced double star for Max in the cycle-free game scored by P4"
    return p


def mini_pathbuilder() -> TreeBuilder:
    p = TreeBuilder(_path_target, "mini_pathbuilder", Player.MINI)
    p.summary = "Mini builds a path on floor(n/2)+1 vertices, keeping P4 copies low."
    p.anchor = "long path for Mini in the cycle-free game scored by P4"
    return p


class MiniNonleafMaker(Policy):
    policy_id = "mini_nonleaf_maker"
    summary = "Mini joins a leaf of one component to another component, creating a new non-leaf every move."
    anchor = "leaf-joining strategy for Mini in the cycle-free game scored by stars"

    def applicable(self, spec, side):
        h = spec.score
        return _cycle_free(spec) and h.kind == "star" and h.order >= 5 and side is Player.MINI

    def applicability(self):
        return "F=cycles, H=S_k with k >= 5, side Mini"

    def decide(self, spec, g, memo, legal):
        iso = isolated_vertices(g)
        if g.num_edges == 0 or (g.num_edges == 1 and len(iso) >= 2):
            # opening: an edge of our own, disjoint from Max's first edge if there is one
            return self.pick(g, memo, [(iso[0], iso[1])]), memo
        leaves = [v for v in range(g.n) if g.rows[v] and not g.rows[v] & (g.rows[v] - 1)]
        comp = {v: component_of(g, v) for v in leaves}
        pairs = [(a, b) for a in leaves for b in leaves if a < b and not comp[a] >> b & 1]
        if pairs:
            return self.pick(g, memo, pairs), memo
        spare = set(iso[1:])
        others = [(a, w) for a in leaves for w in range(g.n) if not comp[a] >> w & 1 and w not in spare]
        if others:
            return self.pick(g, memo, others), memo
        if len(iso) >= 2:
            return self.pick(g, memo, [(iso[0], iso[1])]), memo
        raise self.gap("no leaf can reach another component")
