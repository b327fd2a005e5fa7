"""Small labeled graphs with bit-row adjacency.

Vertices are ``0..n-1`` with ``n <= 32``; row ``v`` is an int whose bit
``w`` is set iff ``vw`` is an edge.  Graphs are immutable and hashable,
so they can be used directly as dictionary keys and shared freely.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

from .errors import GraphError

MAX_VERTICES = 32
MAX_PATH_COMPONENT = 24
MAX_CANON_COMPONENT = 32


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, rows: Sequence[int] | None = None):
        if not 0 <= n <= MAX_VERTICES:
            raise GraphError(f"vertex count {n} outside 0..{MAX_VERTICES}")
        if rows is None:
            rows = (0,) * n
        rows = tuple(rows)
        if len(rows) != n:
            raise GraphError("row count does not match n")
        self.n = n
        self.rows = rows
        self._hash = hash((n, rows))

    # -- construction ---------------------------------------------------
    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            if rows[u] >> v & 1:
                raise GraphError(f"duplicate edge {u}-{v}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def path(cls, k: int, n: int | None = None) -> "Graph":
        return cls.from_edges(n or k, [(i, i + 1) for i in range(k - 1)])

    @classmethod
    def cycle(cls, k: int, n: int | None = None) -> "Graph":
        return cls.from_edges(n or k, [(i, (i + 1) % k) for i in range(k)])

    @classmethod
    def complete(cls, k: int, n: int | None = None) -> "Graph":
        return cls.from_edges(n or k, [(i, j) for i in range(k) for j in range(i + 1, k)])

    @classmethod
    def star(cls, leaves: int, n: int | None = None) -> "Graph":
        """Star with centre 0 and ``leaves`` leaves."""
        return cls.from_edges(n or leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @classmethod
    def double_star(cls, x: int, y: int, n: int | None = None) -> "Graph":
        """Centres 0 and 1; x leaves on 0, y leaves on 1."""
        edges = [(0, 1)]
        edges += [(0, 2 + i) for i in range(x)]
        edges += [(1, 2 + x + i) for i in range(y)]
        return cls.from_edges(n or x + y + 2, edges)

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        rows = list(self.rows) + [r << shift for r in other.rows]
        return Graph(self.n + other.n, rows)

    # -- queries ----------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.rows[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.rows]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.rows[v]))

    @property
    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.rows[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if not self.rows[u] >> v & 1]

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge {u}-{v} out of range for n={self.n}")
        if self.rows[u] >> v & 1:
            raise GraphError(f"edge {u}-{v} already present")
        rows = list(self.rows)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph(self.n, rows)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        rows = [0] * self.n
        for v in range(self.n):
            rows[perm[v]] = sum(1 << perm[w] for w in bits(self.rows[v]))
        return Graph(self.n, rows)

    def induced(self, mask: int) -> "Graph":
        """Subgraph induced on the vertices of ``mask``, relabelled 0..k-1."""
        verts = list(bits(mask))
        index = {v: i for i, v in enumerate(verts)}
        rows = [sum(1 << index[w] for w in bits(self.rows[v] & mask)) for v in verts]
        return Graph(len(verts), rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


# -- components ---------------------------------------------------------------


def component_masks(g: Graph) -> list[int]:
    """Connected components as vertex bitmasks, ordered by smallest vertex."""
    rows = g.rows
    seen = 0
    out = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        comp = frontier = 1 << v
        while frontier:
            nxt = 0
            for w in bits(frontier):
                nxt |= rows[w]
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        out.append(comp)
    return out


def components(g: Graph) -> list[tuple[int, ...]]:
    """Partition of the vertices into connected components.

    Each part is a sorted tuple; parts are ordered by their smallest vertex.
    """
    return [tuple(bits(m)) for m in component_masks(g)]


def component_of(g: Graph, v: int) -> int:
    rows = g.rows
    comp = frontier = 1 << v
    while frontier:
        nxt = 0
        for w in bits(frontier):
            nxt |= rows[w]
        nxt &= ~comp
        comp |= nxt
        frontier = nxt
    return comp


def edges_within(g: Graph, mask: int) -> int:
    return sum(popcount(g.rows[v] & mask) for v in bits(mask)) // 2


def is_acyclic(g: Graph) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def max_degree(g: Graph) -> int:
    return max((popcount(r) for r in g.rows), default=0)


# -- paths ----------------------------------------------------------------------


def _bfs_far(rows: Sequence[int], start: int, mask: int) -> tuple[int, int]:
    dist = {start: 0}
    queue = deque([start])
    far = start
    while queue:
        v = queue.popleft()
        if dist[v] > dist[far]:
            far = v
        for w in bits(rows[v] & mask):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return far, dist[far]


def _longest_in_component(g: Graph, mask: int) -> int:
    k = popcount(mask)
    if k <= 2:
        return k
    m = edges_within(g, mask)
    if m == k - 1:
        # tree: the longest path is a diameter
        a, _ = _bfs_far(g.rows, next(bits(mask)), mask)
        _, d = _bfs_far(g.rows, a, mask)
        return d + 1
    if k > MAX_PATH_COMPONENT:
        raise GraphError(f"component with {k} vertices exceeds exact longest-path limit {MAX_PATH_COMPONENT}")
    verts = list(bits(mask))
    index = {v: i for i, v in enumerate(verts)}
    adj = [sum(1 << index[w] for w in bits(g.rows[v] & mask)) for v in verts]
    full = (1 << k) - 1
    # ends[S] = vertices at which some path covering exactly S can end
    ends = [0] * (1 << k)
    for i in range(k):
        ends[1 << i] = 1 << i
    best = 1
    for s in range(1, full + 1):
        e = ends[s]
        if not e:
            continue
        size = popcount(s)
        if size > best:
            best = size
            if best == k:
                return k
        for i in bits(e):
            for j in bits(adj[i] & ~s):
                ends[s | 1 << j] |= 1 << j
    return best


def longest_path_vertices(g: Graph) -> int:
    """Number of vertices on a longest simple path (0 for the empty graph)."""
    if g.n == 0:
        return 0
    return max(_longest_in_component(g, m) for m in component_masks(g))


class _Found(Exception):
    pass


def longest_from(rows: Sequence[int], start: int, cap: int, avoid: int = 0) -> int:
    """Vertices on the longest simple path starting at ``start``, capped at ``cap``.

    Vertices in ``avoid`` are never visited.
    """
    best = 1
    if cap <= 1:
        return 1

    def rec(v: int, used: int, length: int) -> None:
        nonlocal best
        if length > best:
            best = length
            if best >= cap:
                raise _Found
        for w in bits(rows[v] & ~used):
            rec(w, used | 1 << w, length + 1)

    try:
        rec(start, avoid | 1 << start, 1)
    except _Found:
        pass
    return best


def has_path_with(g: Graph, s: int, mask: int | None = None) -> bool:
    """True iff some simple path with at least ``s`` vertices lies inside ``mask``."""
    if mask is None:
        mask = (1 << g.n) - 1
    if popcount(mask) < s:
        return False
    avoid = ~mask
    for v in bits(mask):
        if longest_from(g.rows, v, s, avoid & ((1 << g.n) - 1)) >= s:
            return True
    return False


# -- canonical keys ---------------------------------------------------------------

_code_cache: dict = {}
_key_cache: dict = {}
_CACHE_LIMIT = 400_000


def _refine(adj: list[int], labels: list[int]) -> list[int]:
    """Colour refinement; cells are numbered by invariant signatures."""
    k = len(adj)
    count = len(set(labels))
    while True:
        sigs = [(labels[v], tuple(sorted(labels[w] for w in bits(adj[v])))) for v in range(k)]
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [order[s] for s in sigs]
        if len(order) == count:
            return new
        labels, count = new, len(order)


def _general_code(adj: list[int], colors: list[int]) -> bytes:
    k = len(adj)
    width = (k + 7) // 8
    best: list[bytes | None] = [None]

    def emit(labels: list[int]) -> None:
        order = sorted(range(k), key=labels.__getitem__)
        pos = [0] * k
        for i, v in enumerate(order):
            pos[v] = i
        parts = [bytes(colors[v] for v in order)]
        for v in order:
            row = 0
            for w in bits(adj[v]):
                row |= 1 << pos[w]
            parts.append(row.to_bytes(width, "big"))
        code = b"".join(parts)
        if best[0] is None or code < best[0]:
            best[0] = code

    def search(labels: list[int]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(labels):
            cells.setdefault(c, []).append(v)
        if len(cells) == k:
            emit(labels)
            return
        target = min((c for c, vs in cells.items() if len(vs) > 1), key=lambda c: (len(cells[c]), c))
        tried: list[int] = []
        for v in cells[target]:
            # swapping twins is an automorphism fixing the current partition
            if any((adj[v] & ~(1 << t)) == (adj[t] & ~(1 << v)) for t in tried):
                continue
            tried.append(v)
            split = [2 * c + (1 if c == target and w != v else 0) for w, c in enumerate(labels)]
            search(_refine(adj, split))

    degs = [popcount(a) for a in adj]
    init = sorted(set(zip(colors, degs)))
    index = {s: i for i, s in enumerate(init)}
    search(_refine(adj, [index[(colors[v], degs[v])] for v in range(k)]))
    assert best[0] is not None
    return best[0]


def _tree_code(adj: list[int], colors: list[int]) -> bytes:
    k = len(adj)
    degree = [popcount(a) for a in adj]
    remaining = k
    layer = [v for v in range(k) if degree[v] <= 1]
    removed = [False] * k
    while remaining > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            remaining -= 1
            for w in bits(adj[v]):
                if not removed[w]:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [v for v in range(k) if not removed[v]]

    def rooted(v: int, parent: int) -> bytes:
        kids = sorted(rooted(w, v) for w in bits(adj[v]) if w != parent)
        return b"(" + bytes([colors[v]]) + b"".join(kids) + b")"

    if len(centers) == 1:
        return b"T" + rooted(centers[0], -1)
    a, b = centers
    ca, cb = rooted(a, b), rooted(b, a)
    return b"B" + min(ca, cb) + max(ca, cb)


def _component_code(rows: Sequence[int], mask: int, colors: Sequence[int] | None) -> bytes:
    verts = tuple(bits(mask))
    cols = tuple(colors[v] for v in verts) if colors is not None else None
    cache_key = (verts, tuple(rows[v] & mask for v in verts), cols)
    code = _code_cache.get(cache_key)
    if code is not None:
        return code
    k = len(verts)
    index = {v: i for i, v in enumerate(verts)}
    adj = [sum(1 << index[w] for w in bits(rows[v] & mask)) for v in verts]
    col = list(cols) if cols is not None else [0] * k
    degs = [popcount(a) for a in adj]
    m = sum(degs) // 2
    plain = not any(col)
    if k == 1:
        code = b"V" + bytes([col[0]])
    elif plain and m == k - 1 and max(degs) <= 2:
        code = b"P" + bytes([k])
    elif plain and m == k and all(d == 2 for d in degs):
        code = b"C" + bytes([k])
    elif m == k - 1:
        code = _tree_code(adj, col)
    else:
        # trees, paths and cycles have linear codes; only this branch searches
        if k > MAX_CANON_COMPONENT:
            raise GraphError(f"component with {k} vertices exceeds canonical-form limit {MAX_CANON_COMPONENT}")
        code = b"G" + bytes([k]) + _general_code(adj, col)
    if len(_code_cache) > _CACHE_LIMIT:
        _code_cache.clear()
    _code_cache[cache_key] = code
    return code


def canonical_key(g: Graph, colors: Sequence[int] | None = None) -> bytes:
    """Isomorphism-invariant key of ``g``.

    Two graphs get equal keys iff they are isomorphic.  With ``colors`` (one
    small non-negative int per vertex) the key is invariant under
    colour-preserving isomorphisms only.
    """
    if colors is not None:
        colors = tuple(colors)
        if not any(colors):
            colors = None
    cache_key = (g.n, g.rows, colors)
    key = _key_cache.get(cache_key)
    if key is not None:
        return key
    isolated = 0
    codes = []
    for mask in component_masks(g):
        if mask & (mask - 1) == 0 and (colors is None or colors[mask.bit_length() - 1] == 0):
            isolated += 1
            continue
        codes.append(_component_code(g.rows, mask, colors))
    codes.sort()
    key = bytes([g.n, isolated]) + b"".join(len(c).to_bytes(2, "big") + c for c in codes)
    if len(_key_cache) > _CACHE_LIMIT:
        _key_cache.clear()
    _key_cache[cache_key] = key
    return key


def component_code(g: Graph, mask: int) -> bytes:
    """Isomorphism-invariant code of one (uncoloured) component."""
    return _component_code(g.rows, mask, None)


# -- text format -------------------------------------------------------------------


def format_graph(g: Graph) -> str:
    """``n m`` header line followed by one ``u v`` line per edge."""
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise GraphError("graph text must start with a 'n m' line")
    n, m = int(lines[0][0]), int(lines[0][1])
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for parts in body:
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {' '.join(parts)}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges)


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
