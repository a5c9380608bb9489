"""Optimal classical value by exhaustive search over deterministic strategies.

Shared randomness only mixes deterministic strategies and the winning
probability is linear in the box, so the best deterministic strategy is
optimal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .game import DeterministicStrategy, GameFunction, Scenario

__all__ = ["ClassicalResult", "optimal_classical", "strategy_outputs", "MAX_STRATEGIES"]

MAX_STRATEGIES = 1 << 22


@dataclass(frozen=True)
class ClassicalResult:
    value: Fraction
    witness: DeterministicStrategy


@lru_cache(maxsize=16)
def strategy_outputs(s: Scenario) -> tuple[np.ndarray, list]:
    """Joint outputs of every strategy tuple, in lexicographic order.

    Returns ``(S, maps)`` with ``S[t, x]`` the joint output of strategy ``t``
    on joint input ``x``.
    """
    count = 1
    for m in s.inputs:
        count *= s.outputs ** m
    if count > MAX_STRATEGIES:
        raise ValueError(f"{count} deterministic strategies are too many to enumerate")
    digits = s.input_digits()
    per_player = []
    for k, m in enumerate(s.inputs):
        maps = np.array(list(itertools.product(range(s.outputs), repeat=m)), dtype=np.int64)
        # contribution of player k's map to the joint output on each joint input
        per_player.append((maps[:, digits[:, k]] * s.outputs ** k, maps))
    S = np.zeros((1, s.n_inputs), dtype=np.int64)
    for contrib, _ in per_player:
        # earlier players vary slowest, which is lexicographic order on (a_1, ..., a_n)
        S = (S[:, None, :] + contrib[None, :, :]).reshape(-1, s.n_inputs)
    S.setflags(write=False)
    return S, [maps for _, maps in per_player]


def _strategy_at(s: Scenario, index: int, maps) -> DeterministicStrategy:
    sizes = [len(m) for m in maps]
    chosen = []
    for size in reversed(sizes):
        index, r = divmod(index, size)
        chosen.append(r)
    chosen.reverse()
    return DeterministicStrategy(s, tuple(tuple(maps[k][c]) for k, c in enumerate(chosen)))


def win_counts(f: GameFunction) -> np.ndarray:
    S, _ = strategy_outputs(f.scenario)
    return (S == f.as_array()[None, :]).sum(axis=1)


def optimal_classical(f: GameFunction) -> ClassicalResult:
    """Exact optimum; ties go to the lexicographically smallest strategy tuple."""
    s = f.scenario
    _, maps = strategy_outputs(s)
    wins = win_counts(f)
    best = int(np.argmax(wins))
    return ClassicalResult(Fraction(int(wins[best]), s.n_inputs), _strategy_at(s, best, maps))
