"""Score patterns, forbidden patterns and the closed-form counting bounds.

Copies are unlabeled: a copy of ``H`` is a subgraph isomorphic to ``H``,
identified by its vertex and edge sets.  So ``K_4`` holds 12 copies of
``P_4`` (not 24) and the star count is ``sum(comb(deg(v), l - 1))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb

from .errors import GraphError
from .graph import (
    Graph,
    bits,
    component_of,
    has_path_with,
    is_acyclic,
    longest_path_vertices,
    max_degree,
    popcount,
)


@dataclass(frozen=True, order=True)
class Pattern:
    """One of ``P<s>`` (path on s vertices), ``S<l>`` (star on l vertices),
    ``K3`` (triangle) or ``C<k>`` (cycle on k vertices)."""

    kind: str
    order: int

    def __post_init__(self):
        minimum = {"path": 2, "star": 3, "triangle": 3, "cycle": 3}.get(self.kind)
        if minimum is None:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.order < minimum or (self.kind == "triangle" and self.order != 3):
            raise ValueError(f"bad order {self.order} for {self.kind}")

    def __str__(self) -> str:
        prefix = {"path": "P", "star": "S", "cycle": "C"}
        if self.kind == "triangle":
            return "K3"
        return f"{prefix[self.kind]}{self.order}"

    @property
    def num_edges(self) -> int:
        return self.order if self.kind in ("cycle", "triangle") else self.order - 1

    def graph(self) -> Graph:
        if self.kind == "path":
            return Graph.path(self.order)
        if self.kind == "star":
            return Graph.star(self.order - 1)
        return Graph.cycle(self.order)


def Path(s: int) -> Pattern:
    return Pattern("path", s)


def Star(l: int) -> Pattern:
    return Pattern("star", l)


def Triangle() -> Pattern:
    return Pattern("triangle", 3)


def Cycle(k: int) -> Pattern:
    return Pattern("cycle", k)


@dataclass(frozen=True)
class Forbidden:
    """A single forbidden pattern, or (``pattern is None``) every cycle."""

    pattern: Pattern | None = None

    @classmethod
    def single(cls, p: Pattern) -> "Forbidden":
        return cls(p)

    @classmethod
    def all_cycles(cls) -> "Forbidden":
        return cls(None)

    @property
    def is_all_cycles(self) -> bool:
        return self.pattern is None

    def __str__(self) -> str:
        return "cycles" if self.pattern is None else str(self.pattern)


_PATTERN_RE = re.compile(r"^(P|S|C)(\d+)$")


def parse_pattern(text: str) -> Pattern:
    t = text.strip().upper()
    if t == "K3":
        return Triangle()
    m = _PATTERN_RE.match(t)
    if not m:
        raise ValueError(f"cannot parse pattern {text!r} (expected P<s>, S<l>, K3 or C<k>)")
    kind = {"P": "path", "S": "star", "C": "cycle"}[m.group(1)]
    return Pattern(kind, int(m.group(2)))


def parse_forbidden(text: str) -> Forbidden:
    if text.strip().lower() == "cycles":
        return Forbidden.all_cycles()
    return Forbidden.single(parse_pattern(text))


# -- counting -------------------------------------------------------------------


def _count_paths(g: Graph, s: int) -> int:
    if s == 2:
        return g.num_edges
    rows = g.rows
    total = 0

    def rec(v: int, used: int, length: int) -> int:
        if length == s:
            return 1
        return sum(rec(w, used | 1 << w, length + 1) for w in bits(rows[v] & ~used))

    for v in range(g.n):
        total += rec(v, 1 << v, 1)
    # every path is found once from each end
    return total // 2


def _count_cycles(g: Graph, k: int) -> int:
    rows = g.rows
    if k == 3:
        total = 0
        for u in range(g.n):
            for v in bits(rows[u] >> (u + 1) << (u + 1)):
                total += popcount(rows[u] & rows[v] >> (v + 1) << (v + 1))
        return total
    total = 0
    for start in range(g.n):
        # cycles whose smallest vertex is ``start``
        allowed = ((1 << g.n) - 1) >> (start + 1) << (start + 1)

        def rec(v: int, used: int, length: int) -> int:
            if length == k:
                return 1 if rows[v] >> start & 1 else 0
            return sum(rec(w, used | 1 << w, length + 1) for w in bits(rows[v] & allowed & ~used))

        total += rec(start, 1 << start, 1)
    return total // 2


def count_copies(g: Graph, h: Pattern) -> int:
    """Number of (unlabeled) subgraphs of ``g`` isomorphic to ``h``."""
    if h.kind == "path":
        return _count_paths(g, h.order)
    if h.kind == "star":
        return sum(comb(d, h.order - 1) for d in g.degrees())
    return _count_cycles(g, h.order)


def star_count_by_degrees(degrees: list[int], l: int) -> int:
    if l < 3:
        raise ValueError("star order must be at least 3")
    return sum(comb(d, l - 1) for d in degrees)


# -- legality ---------------------------------------------------------------------


def creates_copy(g: Graph, u: int, v: int, f: Forbidden) -> bool:
    """Would adding the non-edge ``uv`` to the F-free graph ``g`` create F?"""
    if u == v or g.has_edge(u, v):
        raise GraphError(f"{u}-{v} is not a non-edge")
    if f.pattern is None:
        return bool(component_of(g, u) >> v & 1)
    p = f.pattern
    if p.kind == "star":
        need = p.order - 2
        return g.degree(u) >= need or g.degree(v) >= need
    if p.kind == "triangle" or (p.kind == "cycle" and p.order == 3):
        return bool(g.rows[u] & g.rows[v])
    g2 = g.add_edge(u, v)
    if p.kind == "path":
        return has_path_with(g2, p.order, component_of(g2, u))
    # cycle of a fixed length through the new edge
    return _count_cycles(g2, p.order) > _count_cycles(g, p.order)


def is_f_free(g: Graph, f: Forbidden) -> bool:
    if f.pattern is None:
        return is_acyclic(g)
    p = f.pattern
    if p.kind == "star":
        return max_degree(g) < p.order - 1
    if p.kind == "path":
        return not has_path_with(g, p.order)
    return count_copies(g, p) == 0


# -- closed-form bounds ---------------------------------------------------------------


def tree_star_upper_bound(n: int, x: int, k: int) -> int:
    """Most copies of S_k in an n-vertex tree with at least x non-leaf vertices."""
    if k < 4 or not 0 <= x <= n:
        raise ValueError("need k >= 4 and 0 <= x <= n")
    return comb(n - x, k - 1)


def doublestar_p4_lower_bound(x: int, y: int, n: int) -> int:
    """Fewest copies of P_4 in an n-vertex tree that contains D_{x,y}.

    Only valid when some vertex lies outside the double star (n > x + y + 2).
    """
    if x < 1 or y < 1:
        raise ValueError("double star needs x, y >= 1")
    if n <= x + y + 2:
        raise ValueError(f"bound requires n > x + y + 2 (got n={n}, x+y+2={x + y + 2})")
    return x * y + min(x, y) + (n - x - y - 2) - 1


def path_bounded_p4_upper_bound(n: int, s: int) -> int:
    """Most copies of P_4 in an n-vertex tree whose longest path has s vertices."""
    if not n >= s >= 4:
        raise ValueError("need n >= s >= 4")
    if s >= 6:
        r = n - s
        return s - 3 + 2 * r + (r // 2) * ((r + 1) // 2)
    r = n - 2
    return (r // 2) * ((r + 1) // 2)


__all__ = [
    "Pattern",
    "Path",
    "Star",
    "Triangle",
    "Cycle",
    "Forbidden",
    "parse_pattern",
    "parse_forbidden",
    "count_copies",
    "star_count_by_degrees",
    "creates_copy",
    "is_f_free",
    "tree_star_upper_bound",
    "doublestar_p4_lower_bound",
    "path_bounded_p4_upper_bound",
    "longest_path_vertices",
]
