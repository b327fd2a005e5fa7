"""Baseline adversaries for fuzzing and play-outs."""

from __future__ import annotations

import random

from .base import Policy


class FirstLegal(Policy):
    policy_id = "first_legal"
    summary = "Always plays the lexicographically first legal edge."
    anchor = "baseline"

    def decide(self, spec, graph, memo, legal):
        return legal[0], memo

    def fingerprint(self, memo):
        # depends on labels, so positions cannot be shared across isomorphic copies
        return None


class UniformRandom(Policy):
    policy_id = "uniform_random"
    summary = "Plays a uniformly random legal edge, seeded per game and per ply."
    anchor = "baseline"

    def decide(self, spec, graph, memo, legal):
        rng = random.Random(f"{memo.seed}:{graph.num_edges}")
        return rng.choice(legal), memo

    def fingerprint(self, memo):
        return None
