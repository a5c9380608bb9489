from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from idgames import games
from idgames.classical import optimal_classical, strategy_outputs
from idgames.game import (
    Box,
    DeterministicStrategy,
    GameFunction,
    Scenario,
    evaluate_deterministic,
    winning_probability,
)
from idgames.symmetry import apply, random_element

S232 = Scenario.parse("2,3,2")


@pytest.mark.parametrize("name, value", [
    ("highest_sdp", Fraction(4, 9)),
    ("addition", Fraction(3, 8)),
    ("tripartite", Fraction(3, 8)),
    ("class25", Fraction(1, 4)),
    ("symmetric5", Fraction(10, 25)),
    ("facet", Fraction(3, 8)),
])
def test_named_values(name, value):
    f = games.get(name)
    res = optimal_classical(f)
    assert res.value == value
    assert evaluate_deterministic(f, res.witness) == value


def test_constant():
    for y in range(4):
        assert optimal_classical(GameFunction.constant(S232, y)).value == 1


def test_matches_naive_search(rng):
    for _ in range(5):
        f = GameFunction.from_int(S232, int(rng.integers(0, S232.n_functions)))
        naive = max(evaluate_deterministic(f, d) for d in DeterministicStrategy.all(S232))
        assert optimal_classical(f).value == naive


def test_ties_pick_lexicographically_first():
    f = GameFunction.constant(Scenario.parse("2,2,2"), 0)
    assert optimal_classical(f).witness.maps == ((0, 0), (0, 0))
    f = games.get("highest_sdp")
    res = optimal_classical(f)
    best = [d for d in DeterministicStrategy.all(f.scenario) if evaluate_deterministic(f, d) == res.value]
    assert res.witness == best[0]


def test_strategy_order_is_lexicographic():
    S, maps = strategy_outputs(S232)
    ds = list(DeterministicStrategy.all(S232))
    assert len(ds) == len(S)
    for t in (0, 1, 17, 63):
        assert np.array_equal(S[t], ds[t].joint_outputs())


def test_invariants(rng):
    for s in (S232, Scenario.parse("3,2,2")):
        for _ in range(20):
            f = GameFunction.from_int(s, int(rng.integers(0, s.n_functions)))
            v = optimal_classical(f).value
            assert v == optimal_classical(apply(random_element(s, rng), f)).value
            assert v >= Fraction(max(Counter(f.table).values()), s.n_inputs)
            assert s.n_inputs % v.denominator == 0


def test_mixtures_never_beat_optimum(rng):
    f = games.get("addition")
    s = f.scenario
    ds = list(DeterministicStrategy.all(s))
    best = optimal_classical(f).value
    for _ in range(20):
        idx = rng.choice(len(ds), 6, replace=False)
        w = [Fraction(int(v) + 1) for v in rng.integers(0, 5, 6)]
        tot = sum(w)
        e = sum((wi / tot * ds[i].to_box().entries for wi, i in zip(w, idx)))
        assert winning_probability(f, Box(s, e)) <= best


def test_too_large():
    with pytest.raises(ValueError):
        optimal_classical(GameFunction.constant(Scenario.parse("2,12,2"), 0))
