"""Exact game values by memoized minimax over canonical states.

Plain minimax with a transposition table: every stored value is exact, so
entries can be shared between any two lines reaching isomorphic positions.
Children that are isomorphic to an already generated sibling are skipped.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

from .engine import GameSpec, GameState, Player, legal_moves_graph, norm
from .errors import BudgetExceeded, CacheError, InvariantViolation, SatgameError, StrategyGap
from .graph import Graph, canonical_key
from .patterns import count_copies

if TYPE_CHECKING:
    from .strategies.base import Policy

CACHE_SCHEMA = "satgame/cache/1"
DEFAULT_MAX_NODES = 10**8


def default_budget() -> int:
    env = os.environ.get("SATGAME_MAX_NODES")
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise SatgameError(f"SATGAME_MAX_NODES must be an integer, got {env!r}") from None
    return DEFAULT_MAX_NODES


@dataclass
class SolveResult:
    value: int
    nodes_expanded: int
    cache_hits: int
    principal_variation: list[tuple[int, int]] | None = None

    def to_dict(self) -> dict:
        pv = None if self.principal_variation is None else [list(m) for m in self.principal_variation]
        return {
            "value": self.value,
            "nodes_expanded": self.nodes_expanded,
            "cache_hits": self.cache_hits,
            "principal_variation": pv,
        }


def _best(values: list[int], player: Player) -> int:
    return max(values) if player is Player.MAX else min(values)


class Solver:
    """Memoized minimax for one game spec.

    ``table`` maps ``(canonical key, to_move)`` to the exact value and can be
    shared between solvers of the same spec (or loaded from a cache file).
    """

    def __init__(self, spec: GameSpec, max_nodes: int | None = None, dedup: bool = True, table: dict | None = None):
        self.spec = spec
        self.max_nodes = default_budget() if max_nodes is None else max_nodes
        self.dedup = dedup
        self.table: dict = {} if table is None else table
        self.nodes_expanded = 0
        self.cache_hits = 0
        self._loaded: set = set()

    # -- core search -------------------------------------------------------------

    def children(self, g: Graph) -> list[tuple[tuple[int, int], Graph, bytes]]:
        """Legal moves with their child graphs, one per isomorphism class when deduplicating."""
        out = []
        seen = set()
        for move in legal_moves_graph(self.spec.forbidden, g):
            child = g.add_edge(*move)
            key = canonical_key(child)
            if self.dedup:
                if key in seen:
                    continue
                seen.add(key)
            out.append((move, child, key))
        return out

    def _value(self, g: Graph, to_move: Player, key: bytes) -> int:
        tkey = (key, to_move.value)
        hit = self.table.get(tkey)
        if hit is not None:
            self.cache_hits += 1
            return hit
        self.nodes_expanded += 1
        if self.nodes_expanded > self.max_nodes:
            raise BudgetExceeded(
                f"node budget {self.max_nodes} exhausted", self.nodes_expanded, self.cache_hits
            )
        kids = self.children(g)
        if not kids:
            value = count_copies(g, self.spec.score)
        else:
            nxt = to_move.other
            value = _best([self._value(child, nxt, ck) for _, child, ck in kids], to_move)
        self.table[tkey] = value
        return value

    def solve_value(self, state: GameState) -> int:
        return self._value(state.graph, state.to_move, canonical_key(state.graph))

    def solve(self, with_pv: bool = True) -> SolveResult:
        root = GameState.initial(self.spec)
        if self.max_nodes >= 1 and _threads() > 1:
            value = self._solve_parallel(root)
        else:
            value = self.solve_value(root)
        pv = self.principal_variation(root) if with_pv else None
        return SolveResult(value, self.nodes_expanded, self.cache_hits, pv)

    def principal_variation(self, state: GameState | None = None) -> list[tuple[int, int]]:
        """One optimal line; ties go to the least canonical child key, then the least move."""
        if state is None:
            state = GameState.initial(self.spec)
        g, player = state.graph, state.to_move
        line = []
        while True:
            kids = self.children(g)
            if not kids:
                return line
            nxt = player.other
            scored = [(self._value(child, nxt, ck), ck, move, child) for move, child, ck in kids]
            target = _best([s[0] for s in scored], player)
            _, _, move, child = min((s for s in scored if s[0] == target), key=lambda s: (s[1], s[2]))
            line.append(move)
            g, player = child, nxt

    def _solve_parallel(self, root: GameState) -> int:
        from concurrent.futures import ProcessPoolExecutor

        kids = self.children(root.graph)
        if not kids:
            return self.solve_value(root)
        nxt = root.to_move.other
        jobs = [(self.spec, child.rows, nxt.value, self.max_nodes) for _, child, _ in kids]
        with ProcessPoolExecutor(max_workers=_threads()) as pool:
            results = list(pool.map(_solve_child, jobs))
        for (_, _, ck), (value, nodes, hits, table) in zip(kids, results):
            self.nodes_expanded += nodes
            self.cache_hits += hits
            # racing writers agree because the value function is deterministic
            for k, v in table.items():
                old = self.table.setdefault(k, v)
                if old != v:
                    raise SatgameError("inconsistent transposition entries from workers")
        return self.solve_value(root)

    # -- persistence -----------------------------------------------------------------

    def save_cache(self, path: str) -> int:
        """Append entries not yet on disk; returns the number written."""
        fresh = not os.path.exists(path) or os.path.getsize(path) == 0
        if not fresh:
            self._check_header(path)
        written = 0
        with open(path, "a", encoding="ascii") as fh:
            if fresh:
                fh.write(f"{CACHE_SCHEMA}\t{self.spec.fingerprint()}\n")
            for (key, player), value in sorted(self.table.items()):
                if (key, player) in self._loaded:
                    continue
                fh.write(f"{key.hex()}\t{player}\t{value}\n")
                self._loaded.add((key, player))
                written += 1
        return written

    def load_cache(self, path: str) -> int:
        self._check_header(path)
        count = 0
        with open(path, encoding="ascii") as fh:
            next(fh)
            for lineno, line in enumerate(fh, start=2):
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3 or parts[1] not in ("max", "mini"):
                    raise CacheError(f"{path}:{lineno}: malformed cache record")
                try:
                    entry = (bytes.fromhex(parts[0]), parts[1])
                    value = int(parts[2])
                except ValueError:
                    raise CacheError(f"{path}:{lineno}: malformed cache record") from None
                old = self.table.setdefault(entry, value)
                if old != value:
                    raise CacheError(f"{path}:{lineno}: conflicting value for a cached position")
                self._loaded.add(entry)
                count += 1
        return count

    def _check_header(self, path: str) -> None:
        with open(path, encoding="ascii") as fh:
            header = fh.readline().rstrip("\n").split("\t")
        if len(header) != 2 or header[0] != CACHE_SCHEMA:
            raise CacheError(f"{path}: not a {CACHE_SCHEMA} file")
        if header[1] != self.spec.fingerprint():
            raise CacheError(f"{path}: cache belongs to {header[1]}, not {self.spec.fingerprint()}")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SATGAME_THREADS", "1")))
    except ValueError:
        return 1


def _solve_child(job):
    spec, rows, player, budget = job
    s = Solver(spec, max_nodes=budget)
    value = s.solve_value(GameState(Graph(spec.n, rows), Player(player)))
    return value, s.nodes_expanded, s.cache_hits, s.table


def solve(spec: GameSpec, max_nodes: int | None = None, threads: int = 1) -> SolveResult:
    if threads > 1:
        os.environ["SATGAME_THREADS"] = str(threads)
    try:
        return Solver(spec, max_nodes=max_nodes).solve()
    finally:
        if threads > 1:
            os.environ.pop("SATGAME_THREADS", None)


def solve_value(spec: GameSpec, state: GameState, table: dict | None = None) -> int:
    return Solver(spec, table=table).solve_value(state)


def principal_variation(spec: GameSpec) -> list[tuple[int, int]]:
    s = Solver(spec)
    s.solve_value(GameState.initial(spec))
    return s.principal_variation()


# -- reference minimax -------------------------------------------------------------------


def reference_value(spec: GameSpec, state: GameState | None = None, memo: bool = False) -> int:
    """Minimax straight from the rules: no canonical keys, no child dedup.

    With ``memo=True`` positions are cached by their labeled adjacency only,
    which keeps n = 6 tractable while staying independent of the canonical
    form.
    """
    if state is None:
        state = GameState.initial(spec)
    table: dict = {}

    def rec(g: Graph, player: Player) -> int:
        if memo:
            hit = table.get(g.rows)
            if hit is not None:
                return hit
        moves = legal_moves_graph(spec.forbidden, g)
        if not moves:
            value = count_copies(g, spec.score)
        else:
            value = _best([rec(g.add_edge(*m), player.other) for m in moves], player)
        if memo:
            table[g.rows] = value
        return value

    return rec(state.graph, state.to_move)


def explore(spec: GameSpec, start: GameState | None = None, max_states: int | None = None) -> dict[bytes, GameState]:
    """Every reachable position, one representative per isomorphism class."""
    if start is None:
        start = GameState.initial(spec)
    found = {canonical_key(start.graph): start}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            for move in legal_moves_graph(spec.forbidden, state.graph):
                child = state.graph.add_edge(*move)
                key = canonical_key(child)
                if key not in found:
                    cs = GameState(child, state.to_move.other)
                    found[key] = cs
                    nxt.append(cs)
                    if max_states is not None and len(found) > max_states:
                        raise BudgetExceeded(f"more than {max_states} reachable positions", len(found))
        frontier = nxt
    return found


# -- best response against a fixed policy --------------------------------------------------


@dataclass
class BestResponse:
    value: int
    line: list[tuple[int, int]]
    nodes_expanded: int
    cache_hits: int
    memoized: bool = True
    terminals: int = field(default=0)


class _Search:
    def __init__(self, spec, policy, side, score_fn, adversary_max, ply_check, max_nodes):
        self.spec = spec
        self.policy = policy
        self.side = side
        self.score_fn = score_fn or (lambda g: count_copies(g, spec.score))
        self.adversary_max = adversary_max
        self.ply_check = ply_check
        self.max_nodes = max_nodes
        self.table: dict = {}
        self.nodes = 0
        self.hits = 0
        self.terminals = 0
        self.memoized = True

    def key(self, g: Graph, memo) -> tuple | None:
        fp = self.policy.fingerprint(memo)
        if fp is None:
            self.memoized = False
            return None
        return canonical_key(g, self.policy.marks(memo, g.n)), fp

    def run(self, g: Graph, player: Player, memo, history: list) -> tuple[int, list]:
        """Value and adversary-optimal line from this position."""
        tkey = self.key(g, memo)
        if tkey is not None:
            hit = self.table.get((tkey, player.value))
            if hit is not None:
                self.hits += 1
                return hit
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(f"node budget {self.max_nodes} exhausted", self.nodes, self.hits)
        legal = legal_moves_graph(self.spec.forbidden, g)
        if not legal:
            self.terminals += 1
            result = (self.score_fn(g), [])
        elif player is self.side:
            try:
                move = norm(*self.policy.choose(self.spec, g, memo, legal))
            except StrategyGap as exc:
                if not exc.history:
                    exc.history = list(history)
                raise
            if move not in legal:
                raise SatgameError(f"{self.policy.policy_id} returned illegal move {move} after {history}")
            result = self._step(g, player, memo, move, history)
        else:
            best = None
            seen = set()
            for move in legal:
                child = g.add_edge(*move)
                new_memo = self.policy.observe(self.spec, g, move, player, memo)
                ck = self.key(child, new_memo)
                if ck is not None:
                    if ck in seen:
                        continue
                    seen.add(ck)
                val, line = self._step(g, player, memo, move, history, child, new_memo)
                if best is None or (val > best[0] if self.adversary_max else val < best[0]):
                    best = (val, line)
            result = best
        if tkey is not None:
            self.table[(tkey, player.value)] = result
        return result

    def _step(self, g, player, memo, move, history, child=None, new_memo=None):
        if child is None:
            child = g.add_edge(*move)
            new_memo = self.policy.observe(self.spec, g, move, player, memo)
        history.append(move)
        try:
            if self.ply_check is not None:
                problem = self.ply_check(self.spec, child, new_memo, player, move)
                if problem:
                    raise InvariantViolation(problem, list(history))
            val, line = self.run(child, player.other, new_memo, history)
        finally:
            history.pop()
        return val, [move] + line


def best_response(
    spec: GameSpec,
    policy: "Policy",
    side: Player,
    score_fn: Callable[[Graph], int] | None = None,
    adversary: str = "auto",
    ply_check: Callable | None = None,
    max_nodes: int | None = None,
    seed: int = 0,
) -> BestResponse:
    """Exact value when ``side`` follows ``policy`` and the opponent plays optimally.

    By default the adversary pursues its own goal (Mini minimizes, Max
    maximizes).  ``adversary="min"``/``"max"`` overrides that, which is how
    success indicators such as "the target tree was built" are audited.
    ``ply_check(spec, graph, memo, mover, move)`` runs after every move and
    may return a message, raised as ``InvariantViolation`` with the line.
    """
    if adversary == "auto":
        adversary_max = side is Player.MINI
    elif adversary in ("min", "max"):
        adversary_max = adversary == "max"
    else:
        raise ValueError("adversary must be auto, min or max")
    budget = default_budget() if max_nodes is None else max_nodes
    search = _Search(spec, policy, side, score_fn, adversary_max, ply_check, budget)
    memo = policy.initial(spec, side, seed)
    value, line = search.run(Graph.empty(spec.n), spec.starter, memo, [])
    return BestResponse(value, line, search.nodes, search.hits, search.memoized, search.terminals)


def best_response_value(spec: GameSpec, policy: "Policy", fixed_side: Player, **kwargs) -> int:
    return best_response(spec, policy, fixed_side, **kwargs).value
