"""Exception hierarchy shared by every satgame module."""

from __future__ import annotations


class SatgameError(Exception):
    """Base class for all errors raised by satgame."""


class GraphError(SatgameError, ValueError):
    """Invalid graph operation (self-loop, duplicate edge, size limit...)."""


class IllegalMove(SatgameError):
    """A move that is not legal in the current position.

    ``history`` holds the moves played before the offending one so the
    position can be replayed.
    """

    def __init__(self, message: str, history: list[tuple[int, int]] | None = None):
        super().__init__(message)
        self.history = list(history or [])


class BudgetExceeded(SatgameError):
    """Search stopped because the node budget ran out."""

    def __init__(self, message: str, nodes_expanded: int = 0, cache_hits: int = 0):
        super().__init__(message)
        self.nodes_expanded = nodes_expanded
        self.cache_hits = cache_hits


class StrategyGap(SatgameError):
    """A strategy reached a position its written case analysis does not cover."""

    def __init__(self, policy_id: str, message: str, history: list[tuple[int, int]] | None = None):
        super().__init__(f"{policy_id}: {message}")
        self.policy_id = policy_id
        self.detail = message
        self.history = list(history or [])


class InapplicablePolicy(SatgameError):
    """The policy does not declare support for the requested game."""


class CacheError(SatgameError):
    """Transposition cache file is malformed or belongs to another game."""


class InvariantViolation(SatgameError):
    """A policy invariant failed; ``history`` replays the offending line."""

    def __init__(self, message: str, history: list[tuple[int, int]] | None = None):
        super().__init__(message)
        self.history = list(history or [])
