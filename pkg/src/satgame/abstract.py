"""Counter abstraction of S_4-games scored by P_3 or P_4.

With maximum degree at most 2 every component is a path or a cycle.  A
cycle can never be touched again, so its contribution to the final score
is fixed the moment it closes and it can be dropped.  The game deficit is
``final score - n``: a closed cycle on k >= 4 vertices carries k copies
of P_3 and of P_4, hence deficit 0; a triangle carries 3 copies of P_3 but
no P_4, hence deficit -3 under P_4 scoring.  What stays relevant is how
many isolated vertices (v), isolated edges (e), three-vertex paths (p3,
only tracked under P_4 scoring) and longer paths (l) remain.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from functools import lru_cache

from .engine import Player
from .errors import GraphError
from .graph import Graph, component_masks, edges_within, max_degree, popcount
from .patterns import Pattern, Path


@dataclass(frozen=True, order=True)
class AbstractS4State:
    v: int
    e: int
    p3: int
    l: int
    to_move: Player = Player.MAX

    def __post_init__(self):
        if min(self.v, self.e, self.p3, self.l) < 0:
            raise ValueError("counters must be non-negative")

    @classmethod
    def whole_game(cls, n: int, starter: Player) -> "AbstractS4State":
        return cls(n, 0, 0, 0, starter)

    def counters(self) -> tuple[int, int, int, int]:
        return (self.v, self.e, self.p3, self.l)

    def __str__(self) -> str:
        return f"[{self.v},{self.e},{self.p3},{self.l}]_{self.to_move.index}"


def _scoring_order(scoring: Pattern) -> int:
    if scoring.kind != "path" or scoring.order not in (3, 4):
        raise ValueError(f"the S4 abstraction supports P3 and P4 scoring, not {scoring}")
    return scoring.order


def abstract_from_graph(g: Graph, scoring: Pattern, to_move: Player = Player.MAX) -> tuple[AbstractS4State, int]:
    """Bucket the components of a max-degree-2 graph; cycles go into the banked deficit."""
    s = _scoring_order(scoring)
    if max_degree(g) > 2:
        raise GraphError("abstraction needs maximum degree at most 2")
    v = e = p3 = l = 0
    banked = 0
    for mask in component_masks(g):
        k = popcount(mask)
        m = edges_within(g, mask)
        if m == k and k >= 3:
            if k == 3 and s == 4:
                banked -= 3
        elif k == 1:
            v += 1
        elif k == 2:
            e += 1
        elif k == 3 and s == 4:
            p3 += 1
        else:
            l += 1
    return AbstractS4State(v, e, p3, l, to_move), banked


def _moves(v: int, e: int, p3: int, l: int, s: int) -> list[tuple[tuple[int, int, int, int], int]]:
    out = []
    if v >= 2:
        out.append(((v - 2, e + 1, p3, l), 0))
    if v >= 1 and e >= 1:
        out.append(((v - 1, e - 1, p3 + 1, l) if s == 4 else (v - 1, e - 1, p3, l + 1), 0))
    if e >= 2:
        out.append(((v, e - 2, p3, l + 1), 0))
    if p3 >= 1:
        out.append(((v, e, p3 - 1, l), -3))  # close the triangle
        if v >= 1:
            out.append(((v - 1, e, p3 - 1, l + 1), 0))
        if e >= 1:
            out.append(((v, e - 1, p3 - 1, l + 1), 0))
        if p3 >= 2:
            out.append(((v, e, p3 - 2, l + 1), 0))
        if l >= 1:
            out.append(((v, e, p3 - 1, l), 0))
    if l >= 1:
        out.append(((v, e, p3, l - 1), 0))  # close the cycle
        if v >= 1:
            out.append(((v - 1, e, p3, l), 0))
        if e >= 1:
            out.append(((v, e - 1, p3, l), 0))
        if l >= 2:
            out.append(((v, e, p3, l - 1), 0))
    # several joins can land on the same counters; keep one of each
    seen = {}
    for succ, delta in out:
        seen.setdefault((succ, delta), None)
    return list(seen)


def abstract_moves(state: AbstractS4State, scoring: Pattern) -> list[tuple[AbstractS4State, int]]:
    """Distinct successors with the deficit banked by the move."""
    s = _scoring_order(scoring)
    if s == 3 and state.p3:
        raise ValueError("P3 scoring folds three-vertex paths into l")
    nxt = state.to_move.other
    return [(AbstractS4State(*c, nxt), d) for c, d in _moves(*state.counters(), s)]


def is_abstract_terminal(state: AbstractS4State) -> bool:
    return state.p3 == 0 and state.l == 0 and state.v + state.e <= 1


@lru_cache(maxsize=None)
def _solve(v: int, e: int, p3: int, l: int, maximizing: bool, s: int) -> int:
    moves = _moves(v, e, p3, l, s)
    if not moves:
        return -v - 2 * e
    vals = [d + _solve(*c, not maximizing, s) for c, d in moves]
    return max(vals) if maximizing else min(vals)


def abstract_solve(state: AbstractS4State, scoring: Pattern) -> int:
    """Optimal deficit from ``state`` (not counting anything banked before)."""
    s = _scoring_order(scoring)
    if s == 3 and state.p3:
        raise ValueError("P3 scoring folds three-vertex paths into l")
    # each move removes a component or an isolated vertex, so depth stays below the counter total
    depth = 2 * (state.v + state.e + state.p3 + state.l) + 200
    if depth > sys.getrecursionlimit():
        sys.setrecursionlimit(depth)
    return _solve(*state.counters(), state.to_move is Player.MAX, s)


def game_deficit(n: int, starter: Player, scoring: Pattern) -> int:
    """``[n]_i``: the optimal deficit of the whole game."""
    return abstract_solve(AbstractS4State.whole_game(n, starter), scoring)


def theorem_p3_closed_form(n: int, starter: Player) -> int:
    """s_i(n, #P3, S4) for n >= 8: n when parities of n and i differ, else n - 1."""
    if n < 8:
        raise ValueError("closed form holds for n >= 8; use the small-n table below that")
    i = starter.index
    return n if n % 2 != i % 2 else n - 1


# -- published values -----------------------------------------------------------------------

# offsets s_i - n for n = 1..12
PUBLISHED_P3_OFFSETS = {
    Player.MAX: (-1, -2, 0, 0, -1, 0, 0, 0, -1, 0, -1, 0),
    Player.MINI: (-1, -2, 0, 0, 0, -1, 0, -1, 0, -1, 0, -1),
}


def published_p3_value(n: int, starter: Player) -> int:
    if not 1 <= n <= 12:
        raise ValueError("tabulated for 1 <= n <= 12")
    return n + PUBLISHED_P3_OFFSETS[starter][n - 1]


def published_p4_cell(n: int, starter: Player) -> tuple[str, int]:
    """The published P4 cell as ``(comparator, value)``, comparator ``"="`` or ``"<="``."""
    if n < 1:
        raise ValueError("n must be positive")
    mx = starter is Player.MAX
    if n <= 3:
        return "=", 0  # n - 1, n - 2, n - 3 for n = 1, 2, 3
    if n == 4:
        return "=", n
    if n == 5:
        return ("<=", n - 1) if mx else ("=", n)
    r = (n - 6) % 4
    if r == 0:
        return "<=", n - 2 if mx else n - 1
    if r == 1:
        return "=", n - 3
    if r == 2:
        return "<=", n - 2 if mx else n - 1
    return "<=", n - 1 if mx else n - 2


@dataclass
class TableRow:
    n: int
    s1: int
    s2: int
    published_s1: str
    published_s2: str
    match: bool
    bound_only: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _cell_text(comparator: str, value: int) -> str:
    return str(value) if comparator == "=" else f"<={value}"


def table_p3(max_n: int) -> list[TableRow]:
    rows = []
    for n in range(1, max_n + 1):
        s1 = n + game_deficit(n, Player.MAX, Path(3))
        s2 = n + game_deficit(n, Player.MINI, Path(3))
        if n <= 12:
            p1, p2 = published_p3_value(n, Player.MAX), published_p3_value(n, Player.MINI)
        else:
            p1, p2 = theorem_p3_closed_form(n, Player.MAX), theorem_p3_closed_form(n, Player.MINI)
        rows.append(TableRow(n, s1, s2, str(p1), str(p2), s1 == p1 and s2 == p2, False))
    return rows


def table_p4(max_n: int) -> list[TableRow]:
    rows = []
    for n in range(1, max_n + 1):
        s1 = n + game_deficit(n, Player.MAX, Path(4))
        s2 = n + game_deficit(n, Player.MINI, Path(4))
        c1 = published_p4_cell(n, Player.MAX)
        c2 = published_p4_cell(n, Player.MINI)
        ok = True
        for (cmp, val), got in ((c1, s1), (c2, s2)):
            ok &= got == val if cmp == "=" else got <= val
            if n >= 4:
                ok &= got >= n - 3
        bound_only = c1[0] != "=" or c2[0] != "="
        rows.append(TableRow(n, s1, s2, _cell_text(*c1), _cell_text(*c2), ok, bound_only))
    return rows


def rows_to_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "s1", "s2", "published_s1", "published_s2", "match", "bound_only"])
    for r in rows:
        w.writerow([r.n, r.s1, r.s2, r.published_s1, r.published_s2, int(r.match), int(r.bound_only)])
    return buf.getvalue()


def rows_to_json(rows: list[TableRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], sort_keys=True)
