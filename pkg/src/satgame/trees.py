"""Trees up to isomorphism, subtree containment and brute-force copy counting."""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .graph import Graph, bits, canonical_key

MAX_TREE_ORDER = 10


@lru_cache(maxsize=None)
def _trees(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph.empty(1),)
    seen: dict[bytes, Graph] = {}
    for t in _trees(n - 1):
        for v in range(n - 1):
            g = Graph(n, list(t.rows) + [0]).add_edge(v, n - 1)
            seen.setdefault(canonical_key(g), g)
    return tuple(seen[k] for k in sorted(seen))


def enumerate_trees(n: int) -> list[Graph]:
    """One tree per isomorphism class on ``n`` vertices, ordered by canonical key."""
    if not 1 <= n <= MAX_TREE_ORDER:
        raise ValueError(f"tree enumeration supports 1 <= n <= {MAX_TREE_ORDER}")
    return list(_trees(n))


def _bfs(tree: Graph) -> tuple[list[int], list[int]]:
    order, parent, seen = [0], [-1], {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in bits(tree.rows[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                parent.append(u)
                queue.append(w)
    return order, parent


def contains_tree(g: Graph, tree: Graph) -> bool:
    """Whether ``g`` has a (not necessarily induced) subgraph isomorphic to ``tree``."""
    k = tree.n
    if k > g.n:
        return False
    if k == 1:
        return g.n >= 1
    order, parent = _bfs(tree)
    pos = {v: i for i, v in enumerate(order)}
    image = [0] * k

    def place(i: int, used: int) -> bool:
        if i == k:
            return True
        p = image[pos[parent[i]]]
        for w in bits(g.rows[p] & ~used):
            image[i] = w
            if place(i + 1, used | 1 << w):
                return True
        return False

    for start in range(g.n):
        image[0] = start
        if place(1, 1 << start):
            return True
    return False


def count_embeddings(host: Graph, pattern: Graph) -> int:
    """Injective edge-preserving maps from ``pattern`` (no isolated vertices) into ``host``."""
    k = pattern.n
    # order pattern vertices so each one after the first touches an earlier one when possible
    order: list[int] = []
    for root in range(k):
        if root in order:
            continue
        order.append(root)
        i = len(order) - 1
        while i < len(order):
            for w in bits(pattern.rows[order[i]]):
                if w not in order:
                    order.append(w)
            i += 1
    back = [[order.index(w) for w in bits(pattern.rows[v]) if order.index(w) < j] for j, v in enumerate(order)]
    image = [0] * k
    total = 0

    def rec(j: int, used: int) -> None:
        nonlocal total
        if j == k:
            total += 1
            return
        cand = (1 << host.n) - 1
        for b in back[j]:
            cand &= host.rows[image[b]]
        for w in bits(cand & ~used):
            image[j] = w
            rec(j + 1, used | 1 << w)

    rec(0, 0)
    return total


def brute_force_copies(host: Graph, pattern: Graph) -> int:
    """Unlabeled copies of ``pattern`` in ``host``: embeddings divided by automorphisms."""
    auts = count_embeddings(pattern, pattern)
    return count_embeddings(host, pattern) // auts
