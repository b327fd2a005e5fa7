"""Policy protocol shared by every strategy.

A policy is a pure function of the position and a small immutable memo.
The memo is threaded by the caller: ``initial`` creates it, ``observe`` is
called after every move (by either player) and ``choose`` picks a move.
Because the memo is immutable, branching searches can share it freely.

For memoized best-response search a policy exposes ``marks`` (vertex
colours that pin the labelled parts of its memo, such as the opponent's
last edge) and ``fingerprint`` (the label-free remainder).  Ties between
candidate moves are always broken by the least canonical key of the
resulting marked position, so a policy commutes with relabelling and
isomorphic positions can share one table entry.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from ..engine import GameSpec, GameState, Player, legal_moves_graph, norm
from ..errors import InapplicablePolicy, SatgameError, StrategyGap
from ..graph import Graph, canonical_key


@dataclass(frozen=True)
class Memo:
    side: Player
    stage: int = 0
    last: tuple[int, int] | None = None  # the opponent's most recent move
    roles: tuple[int, ...] = ()  # graph vertex playing each role, in role order
    flags: tuple = ()
    seed: int = 0


class Policy:
    policy_id = "policy"
    summary = ""
    anchor = ""
    uses_last = False

    # -- applicability ---------------------------------------------------------------

    def applicable(self, spec: GameSpec, side: Player) -> bool:
        return True

    def applicability(self) -> str:
        return "any game"

    def check_applicable(self, spec: GameSpec, side: Player) -> None:
        if not self.applicable(spec, side):
            raise InapplicablePolicy(f"{self.policy_id} does not apply to {spec.fingerprint()} as {side.value}")

    # -- memo threading --------------------------------------------------------------

    def initial(self, spec: GameSpec, side: Player, seed: int = 0) -> Memo:
        return Memo(side, seed=seed)

    def observe(self, spec: GameSpec, before: Graph, move: tuple[int, int], mover: Player, memo: Memo) -> Memo:
        move = norm(*move)
        if mover is memo.side:
            legal = legal_moves_graph(spec.forbidden, before)
            try:
                chosen, new = self._decide(spec, before, memo, legal)
            except StrategyGap:
                return memo
            if chosen != move:
                # someone else moved for us (replayed history); keep the memo as is
                return memo
            return new
        new = self.after_opponent(spec, before, move, memo)
        if self.uses_last:
            new = replace(new, last=move)
        return new

    def after_opponent(self, spec: GameSpec, before: Graph, move: tuple[int, int], memo: Memo) -> Memo:
        return memo

    def choose(self, spec: GameSpec, graph: Graph, memo: Memo, legal: list | None = None) -> tuple[int, int]:
        if legal is None:
            legal = legal_moves_graph(spec.forbidden, graph)
        if not legal:
            raise SatgameError(f"{self.policy_id}: no legal move")
        return self._decide(spec, graph, memo, legal)[0]

    def _decide(self, spec, graph, memo, legal):
        cache = self.__dict__.setdefault("_cache", {})
        key = (spec, graph.rows, memo)
        hit = cache.get(key)
        if hit is None:
            move, new = self.decide(spec, graph, memo, legal)
            move = norm(*move)
            hit = (move, new)
            if len(cache) > 200_000:
                cache.clear()
            cache[key] = hit
        return hit

    def decide(self, spec: GameSpec, graph: Graph, memo: Memo, legal: list) -> tuple[tuple[int, int], Memo]:
        """The move to play and the memo that holds after playing it."""
        raise NotImplementedError

    def select_move(self, spec: GameSpec, state: GameState, history: Iterable[tuple[int, int]], seed: int = 0):
        """Replay ``history`` from the empty graph, then choose for ``state.to_move``."""
        side = state.to_move
        memo = self.initial(spec, side, seed)
        g = Graph.empty(spec.n)
        player = spec.starter
        for move in history:
            memo = self.observe(spec, g, move, player, memo)
            g = g.add_edge(*move)
            player = player.other
        if g != state.graph:
            raise SatgameError("history does not reproduce the given state")
        return self.choose(spec, g, memo)

    # -- memoization support ------------------------------------------------------------

    def marks(self, memo: Memo, n: int) -> tuple[int, ...] | None:
        if not memo.roles and (memo.last is None or not self.uses_last):
            return None
        colors = [0] * n
        for i, v in enumerate(memo.roles):
            colors[v] = 2 * (i + 1)
        if self.uses_last and memo.last is not None:
            for v in memo.last:
                colors[v] += 1
        return tuple(colors)

    def fingerprint(self, memo: Memo):
        return (memo.stage, memo.flags, len(memo.roles), memo.last is not None)

    # -- helpers ----------------------------------------------------------------------------

    def pick(self, graph: Graph, memo: Memo, candidates: Iterable[tuple[int, int]], memo_after=None) -> tuple[int, int]:
        """Least candidate by canonical key of the marked child position, then by label.

        ``memo_after(move)`` gives the memo that would follow a candidate when
        the move itself assigns roles; its marks are then used for the key.
        """
        marks = self.marks(memo, graph.n)
        best = None
        for move in candidates:
            move = norm(*move)
            if memo_after is not None:
                marks = self.marks(memo_after(move), graph.n)
            key = (canonical_key(graph.add_edge(*move), marks), move)
            if best is None or key < best:
                best = key
        if best is None:
            raise SatgameError(f"{self.policy_id}: empty candidate set")
        return best[1]

    def gap(self, message: str) -> StrategyGap:
        return StrategyGap(self.policy_id, message)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.policy_id}>"


def reduce_isolated(graph: Graph, memo: Memo, policy: Policy, moves: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop moves that differ only by which unmarked isolated vertex they use.

    Unmarked isolated vertices are interchangeable, so keeping the moves that
    use the two lowest of them loses nothing and saves canonical-key work.
    """
    marks = policy.marks(memo, graph.n)
    iso = [v for v in range(graph.n) if graph.rows[v] == 0 and (marks is None or marks[v] == 0)]
    drop = set(iso[2:])
    return [m for m in moves if m[0] not in drop and m[1] not in drop]
