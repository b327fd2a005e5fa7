"""Component vocabulary used by the strategy case analyses."""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import Graph, bits, component_masks, edges_within, popcount

ISOLATED = "K1"
K2 = "K2"
P3 = "P3"
P4 = "P4"
LONG_PATH = "P5+"
K13 = "K13"
C3 = "C3"
C4 = "C4"
C5 = "C5"
LONG_CYCLE = "C6+"
K4_MINUS_E = "K4-e"
K4 = "K4"
G41 = "G41"
DOUBLE_STAR = "DoubleStar"
TREE = "Tree"
OTHER = "Other"


@dataclass(frozen=True)
class ComponentShape:
    kind: str
    size: int
    # path/cycle order, or (x, y) with x <= y for a double star
    params: tuple = ()

    def __str__(self) -> str:
        if self.kind in (LONG_PATH, LONG_CYCLE):
            return f"{self.kind[0]}{self.size}"
        if self.kind == DOUBLE_STAR:
            return f"D{self.params[0]},{self.params[1]}"
        return self.kind


def classify_component(g: Graph, comp: int | frozenset | tuple | set) -> ComponentShape:
    """Isomorphism-exact shape of one component, given as a bitmask or vertex collection."""
    mask = comp if isinstance(comp, int) else sum(1 << v for v in comp)
    k = popcount(mask)
    m = edges_within(g, mask)
    degs = sorted((popcount(g.rows[v] & mask) for v in bits(mask)), reverse=True)
    if k == 1:
        return ComponentShape(ISOLATED, 1)
    if k == 2:
        return ComponentShape(K2, 2)
    if m == k - 1:
        if degs[0] <= 2:
            kind = {3: P3, 4: P4}.get(k, LONG_PATH)
            return ComponentShape(kind, k, (k,))
        if k == 4:
            return ComponentShape(K13, 4)
        # a tree of diameter 3 is a double star: exactly two non-leaves, adjacent
        inner = [v for v in bits(mask) if popcount(g.rows[v] & mask) > 1]
        if len(inner) == 2:
            x, y = sorted(popcount(g.rows[v] & mask) - 1 for v in inner)
            return ComponentShape(DOUBLE_STAR, k, (x, y))
        return ComponentShape(TREE, k)
    if m == k and degs[0] == 2:
        kind = {3: C3, 4: C4, 5: C5}.get(k, LONG_CYCLE)
        return ComponentShape(kind, k, (k,))
    if k == 4:
        if m == 6:
            return ComponentShape(K4, 4)
        if m == 5:
            return ComponentShape(K4_MINUS_E, 4)
        if m == 4 and degs == [3, 2, 2, 1]:
            return ComponentShape(G41, 4)
    return ComponentShape(OTHER, k)


@dataclass(frozen=True)
class Component:
    mask: int
    shape: ComponentShape

    @property
    def kind(self) -> str:
        return self.shape.kind

    @property
    def size(self) -> int:
        return self.shape.size

    def vertices(self) -> list[int]:
        return list(bits(self.mask))


def component_list(g: Graph) -> list[Component]:
    return [Component(m, classify_component(g, m)) for m in component_masks(g)]


def isolated_vertices(g: Graph) -> list[int]:
    return [v for v in range(g.n) if g.rows[v] == 0]


def path_ends(g: Graph, mask: int) -> list[int]:
    return [v for v in bits(mask) if popcount(g.rows[v] & mask) <= 1]


def is_cycle_shape(kind: str) -> bool:
    return kind in (C3, C4, C5, LONG_CYCLE)


def is_path_shape(kind: str) -> bool:
    return kind in (K2, P3, P4, LONG_PATH)


def is_hamiltonian(g: Graph, mask: int) -> bool:
    """At most two vertices, or a Hamiltonian cycle through the whole component."""
    k = popcount(mask)
    if k <= 2:
        return True
    rows = g.rows
    if any(popcount(rows[v] & mask) < 2 for v in bits(mask)):
        return False
    start = (mask & -mask).bit_length() - 1

    def rec(v: int, used: int) -> bool:
        if used == mask:
            return bool(rows[v] >> start & 1)
        return any(rec(w, used | 1 << w) for w in bits(rows[v] & mask & ~used))

    return rec(start, 1 << start)


def is_clique(g: Graph, mask: int) -> bool:
    k = popcount(mask)
    return edges_within(g, mask) == k * (k - 1) // 2
