"""Game mechanics: specs, positions, legal moves, scoring and play-outs."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

from .errors import IllegalMove, InvariantViolation, SatgameError, StrategyGap
from .graph import Graph, bits, component_masks, longest_from, has_path_with, popcount
from .patterns import Forbidden, Pattern, count_copies, creates_copy, is_f_free, parse_forbidden, parse_pattern

if TYPE_CHECKING:
    from .strategies.base import Policy

RECORD_SCHEMA = "satgame/record/1"

Move = tuple  # normalised (u, v) with u < v


class Player(enum.Enum):
    MAX = "max"
    MINI = "mini"

    @property
    def other(self) -> "Player":
        return Player.MINI if self is Player.MAX else Player.MAX

    @property
    def index(self) -> int:
        """1 when Max, 2 when Mini (the usual subscript of s_i)."""
        return 1 if self is Player.MAX else 2

    @classmethod
    def parse(cls, text: str) -> "Player":
        t = str(text).strip().lower()
        if t in ("max", "1"):
            return cls.MAX
        if t in ("mini", "min", "2"):
            return cls.MINI
        raise ValueError(f"unknown player {text!r} (use max or mini)")


@dataclass(frozen=True)
class GameSpec:
    forbidden: Forbidden
    score: Pattern
    n: int
    starter: Player = Player.MAX

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @classmethod
    def parse(cls, forbid: str, score: str, n: int, starter: str | Player = "max") -> "GameSpec":
        if not isinstance(starter, Player):
            starter = Player.parse(starter)
        return cls(parse_forbidden(forbid), parse_pattern(score), int(n), starter)

    def with_starter(self, starter: Player) -> "GameSpec":
        return GameSpec(self.forbidden, self.score, self.n, starter)

    def with_n(self, n: int) -> "GameSpec":
        return GameSpec(self.forbidden, self.score, n, self.starter)

    def fingerprint(self) -> str:
        return f"F={self.forbidden};H={self.score};n={self.n};start={self.starter.value}"

    def to_dict(self) -> dict:
        return {
            "forbid": str(self.forbidden),
            "score": str(self.score),
            "n": self.n,
            "starter": self.starter.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameSpec":
        return cls.parse(d["forbid"], d["score"], d["n"], d["starter"])

    def to_move(self, num_edges: int) -> Player:
        """Players alternate without passing, so the edge count fixes the mover."""
        return self.starter if num_edges % 2 == 0 else self.starter.other


@dataclass(frozen=True)
class GameState:
    graph: Graph
    to_move: Player

    @classmethod
    def initial(cls, spec: GameSpec) -> "GameState":
        return cls(Graph.empty(spec.n), spec.starter)


def norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def legal_moves_graph(f: Forbidden, g: Graph) -> list[tuple[int, int]]:
    """All non-edges whose addition keeps ``g`` F-free, in lexicographic order."""
    n = g.n
    rows = g.rows
    p = f.pattern
    out = []
    if p is None:
        comp = [0] * n
        for i, m in enumerate(component_masks(g)):
            for v in bits(m):
                comp[v] = i
        for u in range(n):
            cu = comp[u]
            for v in range(u + 1, n):
                if comp[v] != cu:
                    out.append((u, v))
        return out
    if p.kind == "star":
        need = p.order - 2
        free = [popcount(r) < need for r in rows]
        for u in range(n):
            if not free[u]:
                continue
            ru = rows[u]
            for v in range(u + 1, n):
                if free[v] and not ru >> v & 1:
                    out.append((u, v))
        return out
    if p.kind == "path":
        s = p.order
        masks = component_masks(g)
        comp = [0] * n
        for m in masks:
            for v in bits(m):
                comp[v] = m
        ends = [longest_from(rows, v, s - 1, ~comp[v] & ((1 << n) - 1)) for v in range(n)]
        for u in range(n):
            ru = rows[u]
            for v in range(u + 1, n):
                if ru >> v & 1:
                    continue
                if comp[u] != comp[v]:
                    if ends[u] + ends[v] < s:
                        out.append((u, v))
                else:
                    g2 = g.add_edge(u, v)
                    if not has_path_with(g2, s, comp[u]):
                        out.append((u, v))
        return out
    return [(u, v) for u, v in g.non_edges() if not creates_copy(g, u, v, f)]


def legal_moves(spec: GameSpec, state: GameState) -> list[tuple[int, int]]:
    return legal_moves_graph(spec.forbidden, state.graph)


def is_terminal(spec: GameSpec, state: GameState) -> bool:
    return not legal_moves(spec, state)


def apply_move(spec: GameSpec, state: GameState, move: tuple[int, int]) -> GameState:
    u, v = norm(*move)
    g = state.graph
    if not (0 <= u < g.n and 0 <= v < g.n) or u == v or g.has_edge(u, v):
        raise IllegalMove(f"{u}-{v} is not a non-edge")
    if creates_copy(g, u, v, spec.forbidden):
        raise IllegalMove(f"{u}-{v} would create {spec.forbidden}")
    return GameState(g.add_edge(u, v), state.to_move.other)


def final_score(spec: GameSpec, g: Graph) -> int:
    if legal_moves_graph(spec.forbidden, g):
        raise SatgameError("final_score called on a graph that still has legal moves")
    return count_copies(g, spec.score)


@dataclass
class GameRecord:
    spec: GameSpec
    moves: list[tuple[int, int]] = field(default_factory=list)
    final_graph: Graph | None = None
    final_score: int | None = None

    def replay(self) -> Graph:
        state = GameState.initial(self.spec)
        for m in self.moves:
            state = apply_move(self.spec, state, m)
        return state.graph

    def movers(self) -> list[Player]:
        p = self.spec.starter
        out = []
        for _ in self.moves:
            out.append(p)
            p = p.other
        return out

    def to_dict(self) -> dict:
        return {
            "schema": RECORD_SCHEMA,
            "spec": self.spec.to_dict(),
            "moves": [list(m) for m in self.moves],
            "final_edges": [list(e) for e in self.final_graph.edges()] if self.final_graph is not None else None,
            "final_score": self.final_score,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "GameRecord":
        if d.get("schema") != RECORD_SCHEMA:
            raise SatgameError(f"unsupported record schema {d.get('schema')!r}")
        spec = GameSpec.from_dict(d["spec"])
        rec = cls(spec, [tuple(m) for m in d["moves"]])
        if d.get("final_edges") is not None:
            rec.final_graph = Graph.from_edges(spec.n, [tuple(e) for e in d["final_edges"]])
        rec.final_score = d.get("final_score")
        return rec

    @classmethod
    def from_json(cls, text: str) -> "GameRecord":
        return cls.from_dict(json.loads(text))


def play_out(
    spec: GameSpec,
    policy_max: "Policy",
    policy_mini: "Policy",
    seed: int = 0,
    check_invariants: bool = True,
    on_move: Callable | None = None,
) -> GameRecord:
    """Alternate the two policies from the empty graph until no move is legal.

    ``on_move(spec, graph, memos, mover, move)`` runs after every move and
    may return a message, which aborts the game with ``InvariantViolation``.
    """
    policies = {Player.MAX: policy_max, Player.MINI: policy_mini}
    memos = {p: policies[p].initial(spec, p, seed) for p in Player}
    state = GameState.initial(spec)
    record = GameRecord(spec)
    while True:
        legal = legal_moves(spec, state)
        if not legal:
            break
        mover = state.to_move
        try:
            move = norm(*policies[mover].choose(spec, state.graph, memos[mover], legal))
        except StrategyGap as exc:
            exc.history = list(record.moves)
            raise
        if move not in legal:
            raise IllegalMove(f"{policies[mover].policy_id} played illegal {move}", record.moves)
        for p in Player:
            memos[p] = policies[p].observe(spec, state.graph, move, mover, memos[p])
        state = GameState(state.graph.add_edge(*move), mover.other)
        record.moves.append(move)
        if check_invariants and not is_f_free(state.graph, spec.forbidden):
            raise SatgameError(f"position after {record.moves} is not {spec.forbidden}-free")
        if on_move is not None:
            problem = on_move(spec, state.graph, memos, mover, move)
            if problem:
                raise InvariantViolation(problem, list(record.moves))
    record.final_graph = state.graph
    record.final_score = count_copies(state.graph, spec.score)
    return record
