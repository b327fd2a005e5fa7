"""Scored saturation games: exact solvers, executable strategies and a verification harness."""

from __future__ import annotations

__version__ = "0.1.0"

from .engine import GameRecord, GameSpec, GameState, Player, apply_move, legal_moves, play_out
from .errors import (
    BudgetExceeded,
    CacheError,
    GraphError,
    IllegalMove,
    InapplicablePolicy,
    InvariantViolation,
    SatgameError,
    StrategyGap,
)
from .graph import Graph, canonical_key
from .patterns import Forbidden, Pattern, count_copies, parse_forbidden, parse_pattern
from .solver import SolveResult, Solver, solve

__all__ = [
    "BudgetExceeded",
    "CacheError",
    "Forbidden",
    "GameRecord",
    "GameSpec",
    "GameState",
    "Graph",
    "GraphError",
    "IllegalMove",
    "InapplicablePolicy",
    "InvariantViolation",
    "Pattern",
    "Player",
    "SatgameError",
    "SolveResult",
    "Solver",
    "StrategyGap",
    "apply_move",
    "canonical_key",
    "count_copies",
    "legal_moves",
    "parse_forbidden",
    "parse_pattern",
    "play_out",
    "solve",
    "__version__",
]
