"""Counting argument for the generic no-signaling advantage.

The parity box wins every Id game with probability ``2**(1-n)``, while an
encoding argument bounds how many functions a classical strategy can win with
probability ``omega``.  Logarithms are base 2 throughout.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classical import win_counts
from .game import Box, GameFunction, Scenario

__all__ = [
    "CountingBound",
    "GapSample",
    "parity_box",
    "binary_entropy",
    "hstar",
    "encoding_bound",
    "bound_curve",
    "curve_csv",
    "crossover",
    "empirical_gap_sample",
    "exhaustive_distribution",
]


def parity_box(f: GameFunction) -> Box:
    """Uniform over outputs whose parity matches the parity of ``f(x)``."""
    s = f.scenario
    if s.outputs != 2:
        raise ValueError("the parity box needs binary outputs")
    n = s.n_players
    y_par = s.output_digits().sum(axis=1) % 2
    f_par = s.output_digits()[f.as_array()].sum(axis=1) % 2
    weight = Fraction(1, 2 ** (n - 1))
    e = np.where(y_par[None, :] == f_par[:, None], weight, Fraction(0)).astype(object)
    return Box(s, e)


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError("probability outside [0, 1]")
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def hstar(omega: float, n: int) -> float:
    """Largest entropy of a ``2**n``-letter variable with one letter at ``omega``.

    The remaining mass spreads evenly over the other ``2**n - 1`` letters,
    giving ``h(omega) + (1 - omega) log2(2**n - 1)``.
    """
    if n < 1:
        raise ValueError("need at least one player")
    omega = float(omega)
    return binary_entropy(omega) + (1 - omega) * math.log2(2 ** n - 1)


@dataclass(frozen=True)
class CountingBound:
    n: int
    m: int
    omega: float
    hstar: float
    mprime: float
    log_total: float

    @property
    def log_fraction_bound(self) -> float:
        """log2 of the bound on the fraction of functions with classical value >= omega."""
        return self.mprime - self.log_total


def encoding_bound(n: int, m: int, omega: float) -> CountingBound:
    """A strategy (``m*n`` bits) plus a typical error pattern (``h* m**n`` bits)."""
    if m < 1:
        raise ValueError("need at least one input per player")
    h = hstar(omega, n)
    cells = m ** n
    return CountingBound(n, m, float(omega), h, m * n + h * cells, float(n * cells))


def bound_curve(n: int, omega: float, ms) -> list[CountingBound]:
    return [encoding_bound(n, m, omega) for m in ms]


def curve_csv(bounds: list[CountingBound]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "log_fraction_bound"])
    for b in bounds:
        w.writerow([b.m, repr(b.log_fraction_bound)])
    return buf.getvalue()


def crossover(n: int, omega: float, m_max: int = 10_000) -> int | None:
    """Smallest ``m`` from which the bound stays negative, or None below ``m_max``."""
    if hstar(omega, n) >= n:
        return None
    # beyond the stationary point the bound is decreasing, so the first
    # negative value there is the crossover
    m = 1
    while m <= m_max:
        b = encoding_bound(n, m, omega).log_fraction_bound
        nxt = encoding_bound(n, m + 1, omega).log_fraction_bound
        if b < 0 and nxt < b:
            return m
        m += 1
    return None


@dataclass(frozen=True)
class GapSample:
    n: int
    m: int
    samples: int
    epsilon: Fraction
    distribution: dict[Fraction, int]
    near_floor: int

    @property
    def near_floor_fraction(self) -> Fraction:
        return Fraction(self.near_floor, self.samples)

    @property
    def mean(self) -> Fraction:
        return sum((v * c for v, c in self.distribution.items()), Fraction(0)) / self.samples

    @property
    def ns_floor(self) -> Fraction:
        return Fraction(1, 2 ** (self.n - 1))


def _classical_values(s: Scenario, tables: np.ndarray) -> list[Fraction]:
    out = []
    for row in tables:
        f = GameFunction(s, tuple(int(v) for v in row))
        out.append(Fraction(int(win_counts(f).max()), s.n_inputs))
    return out


def _summarise(n, m, values, epsilon) -> GapSample:
    epsilon = Fraction(epsilon)
    floor = Fraction(1, 2 ** n)
    dist = dict(sorted(Counter(values).items()))
    near = sum(c for v, c in dist.items() if v <= floor + epsilon)
    return GapSample(n, m, len(values), epsilon, dist, near)


def empirical_gap_sample(n: int, m: int, sample_size: int, seed: int = 0,
                         epsilon=Fraction(1, 16)) -> GapSample:
    """Exact classical values of uniformly sampled binary-output functions."""
    s = Scenario.uniform(n, m, 2)
    rng = np.random.default_rng(seed)
    tables = rng.integers(0, s.n_outputs, size=(sample_size, s.n_inputs))
    return _summarise(n, m, _classical_values(s, tables), epsilon)


def exhaustive_distribution(n: int, m: int, epsilon=Fraction(1, 16)) -> GapSample:
    """Same statistics over every function of the scenario."""
    s = Scenario.uniform(n, m, 2)
    if s.n_functions > 1 << 16:
        raise ValueError("scenario too large for exhaustive evaluation")
    codes = np.arange(s.n_functions)
    tables = (codes[:, None] // s.n_outputs ** np.arange(s.n_inputs)) % s.n_outputs
    return _summarise(n, m, _classical_values(s, tables), epsilon)
