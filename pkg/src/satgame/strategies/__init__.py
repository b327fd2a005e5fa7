"""Executable strategies and the policy catalog."""

from __future__ import annotations

from typing import Callable

from ..errors import SatgameError
from .base import Memo, Policy, reduce_isolated
from .baseline import FirstLegal, UniformRandom
from .cyclefree import MiniNonleafMaker, TreeBuilder, balanced_doublestar, max_doublestar, mini_pathbuilder
from .p5free import MaxT1, MiniMinLinear, MiniP4P5, MiniT1, t1_shape_ok
from .s4 import MaxP5S4Second, MaxPathExtension, MiniMatchingExtension, MiniP5S4, MiniP6S4, MiniReduction345
from .shapes import ComponentShape, classify_component, component_list

FACTORIES: dict[str, Callable[[], Policy]] = {
    "max_path_extension": MaxPathExtension,
    "mini_reduction_345": MiniReduction345,
    "mini_matching_extension": MiniMatchingExtension,
    "mini_p5s4": MiniP5S4,
    "max_p5s4_second": MaxP5S4Second,
    "mini_p6s4": MiniP6S4,
    "mini_nonleaf_maker": MiniNonleafMaker,
    "max_doublestar": max_doublestar,
    "mini_pathbuilder": mini_pathbuilder,
    "max_t1": MaxT1,
    "mini_t1": MiniT1,
    "mini_p4p5": MiniP4P5,
    "mini_minlinear_p4": lambda: MiniMinLinear(4),
    "mini_minlinear_p5": lambda: MiniMinLinear(5),
    "mini_minlinear_p6": lambda: MiniMinLinear(6),
    "first_legal": FirstLegal,
    "uniform_random": UniformRandom,
}


def policy_ids() -> list[str]:
    return sorted(FACTORIES)


def get_policy(policy_id: str) -> Policy:
    """A fresh policy instance (instances keep a private decision cache)."""
    try:
        return FACTORIES[policy_id]()
    except KeyError:
        raise SatgameError(f"unknown policy {policy_id!r}; known: {', '.join(policy_ids())}") from None


def catalog() -> list[dict]:
    rows = []
    for pid in policy_ids():
        p = get_policy(pid)
        rows.append({"policy": pid, "applies_to": p.applicability(), "summary": p.summary})
    return rows


__all__ = [
    "ComponentShape",
    "FirstLegal",
    "MaxP5S4Second",
    "MaxPathExtension",
    "MaxT1",
    "Memo",
    "MiniMatchingExtension",
    "MiniMinLinear",
    "MiniNonleafMaker",
    "MiniP4P5",
    "MiniP5S4",
    "MiniP6S4",
    "MiniReduction345",
    "MiniT1",
    "Policy",
    "TreeBuilder",
    "UniformRandom",
    "balanced_doublestar",
    "catalog",
    "classify_component",
    "component_list",
    "get_policy",
    "max_doublestar",
    "mini_pathbuilder",
    "policy_ids",
    "reduce_isolated",
    "t1_shape_ok",
]
