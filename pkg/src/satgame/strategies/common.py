"""Move generators shared by the policies."""

from __future__ import annotations

from ..abstract import abstract_from_graph, abstract_solve
from ..graph import Graph, bits, component_of, popcount
from .base import Memo, Policy, reduce_isolated
from .shapes import path_ends


def close_path(g: Graph, mask: int) -> tuple[int, int]:
    a, b = path_ends(g, mask)
    return (a, b) if a < b else (b, a)


def end_joins(g: Graph, a: int, b: int) -> list[tuple[int, int]]:
    """Edges joining an end of path component ``a`` to an end of path component ``b``."""
    return [(min(x, y), max(x, y)) for x in path_ends(g, a) for y in path_ends(g, b)]


def cross_moves(g: Graph, a: int, b: int) -> list[tuple[int, int]]:
    return [(min(x, y), max(x, y)) for x in bits(a) for y in bits(b)]


def inner_non_edges(g: Graph, mask: int) -> list[tuple[int, int]]:
    out = []
    for u in bits(mask):
        for v in bits(mask & ~g.rows[u]):
            if u < v:
                out.append((u, v))
    return out


def last_component(g: Graph, memo: Memo) -> int | None:
    if memo.last is None:
        return None
    return component_of(g, memo.last[0])


def least_legal(policy: Policy, g: Graph, memo: Memo, legal: list) -> tuple[int, int]:
    """The arbitrary move of a strategy: least child key, then least label."""
    return policy.pick(g, memo, reduce_isolated(g, memo, policy, legal))


def abstract_optimal(policy: Policy, spec, g: Graph, memo: Memo, legal: list, maximize: bool) -> tuple[int, int]:
    """Optimal move of an S_4-game with path scoring, read off the counter abstraction."""
    nxt = memo.side.other
    values = {}
    for move in reduce_isolated(g, memo, policy, legal):
        state, banked = abstract_from_graph(g.add_edge(*move), spec.score, nxt)
        values[move] = banked + abstract_solve(state, spec.score)
    target = max(values.values()) if maximize else min(values.values())
    return policy.pick(g, memo, [m for m, v in values.items() if v == target])


def is_isolated(g: Graph, v: int) -> bool:
    return g.rows[v] == 0


def size(mask: int) -> int:
    return popcount(mask)
