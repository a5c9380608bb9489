"""Reproduction checks for the published numbers.

Each criterion collects a list of :class:`Item` comparisons (expected, actual,
tolerance).  A criterion passes when all of its items pass and it stays inside
its time budget.  ``verify-paper`` on the command line and the acceptance test
module both run :data:`CRITERIA`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import games
from .census import run_census
from .classical import optimal_classical
from .counting import encoding_bound, hstar, parity_box
from .game import GameFunction, Scenario, winning_probability
from .nosignaling import facet_check, is_decomposable, is_extremal, is_no_signaling, optimal_ns
from .quantum import (
    addition_strategy,
    highest_sdp_strategy,
    phi_plus,
    quantum_value,
    seesaw,
    seesaw_fixed_state,
    tripartite_strategy,
)
from .symmetry import apply, random_element

__all__ = ["Item", "CriterionResult", "Criterion", "CRITERIA", "run_all", "format_result"]


@dataclass
class Item:
    label: str
    expected: object
    actual: object
    tolerance: str
    passed: bool


@dataclass
class CriterionResult:
    number: int
    title: str
    items: list[Item]
    seconds: float
    budget: float | None
    stochastic: bool

    @property
    def in_time(self) -> bool:
        return self.budget is None or self.seconds <= self.budget

    @property
    def passed(self) -> bool:
        return self.in_time and all(i.passed for i in self.items)


@dataclass
class Criterion:
    number: int
    title: str
    run: Callable[["Options"], list[Item]]
    budget: float | None = None
    stochastic: bool = False


@dataclass
class Options:
    seed: int = 0
    restarts: int | None = None  # None keeps each check's default
    workers: int = 1
    timings: dict = field(default_factory=dict)

    def r(self, default: int) -> int:
        return default if self.restarts is None else self.restarts


def _exact(label, expected, actual) -> Item:
    return Item(label, expected, actual, "exact", expected == actual)


def _close(label, expected, actual, tol) -> Item:
    return Item(label, expected, actual, f"±{tol:g}", abs(actual - expected) <= tol)


def _at_most(label, bound, actual, slack) -> Item:
    return Item(label, f"<= {bound}", actual, f"+{slack:g}", actual <= bound + slack)


def _timed(opts: Options, label: str, budget: float, fn):
    t = time.perf_counter()
    out = fn()
    dt = time.perf_counter() - t
    opts.timings[label] = dt
    return out, Item(f"{label} runtime", f"< {budget:g} s", round(dt, 2), "", dt < budget)


def _decimals(h: dict[Fraction, int], digits: int = 6) -> dict[float, int]:
    return {round(float(k), digits): v for k, v in h.items()}


# -- 1-3: censuses ------------------------------------------------------------

def c1(opts: Options) -> list[Item]:
    rep, t = _timed(opts, "census 2,2,2", 1.0, lambda: run_census(Scenario.parse("2,2,2")))
    return [
        _exact("functions", 256, rep.total_functions),
        _exact("functions covered by classes", 256, sum(r.orbit_size for r in rep.records)),
        _exact("nontrivial classes", 0, rep.nontrivial_class_count),
        t,
    ]


def c2(opts: Options) -> list[Item]:
    rep, t = _timed(opts, "census 2,3,2", 120.0,
                    lambda: run_census(Scenario.parse("2,3,2"), workers=opts.workers))
    nt = rep.nontrivial
    return [
        _exact("classes", 2162, rep.class_count),
        _exact("nontrivial classes", 256, rep.nontrivial_class_count),
        _exact("functions in nontrivial classes", 196992, rep.nontrivial_function_count),
        _exact("nontrivial omega_cl values", {Fraction(4, 9)}, {r.omega_cl for r in nt}),
        _exact("nontrivial omega_ns values", {Fraction(1, 2)}, {r.omega_ns for r in nt}),
        t,
    ]


def c3(opts: Options) -> list[Item]:
    rep, t = _timed(opts, "census 3,2,2", 600.0,
                    lambda: run_census(Scenario.parse("3,2,2"), workers=opts.workers))
    ns_dec = {0.275: 1, 0.28125: 1, 0.291667: 11, 0.3: 1, 0.3125: 30, 0.333333: 1,
              0.4375: 21, 0.5: 2}
    return [
        _exact("classes", 5876, rep.class_count),
        _exact("nontrivial classes", 68, rep.nontrivial_class_count),
        _exact("functions in nontrivial classes", 34176, rep.nontrivial_function_count),
        _exact("omega_cl histogram", {Fraction(1, 4): 45, Fraction(3, 8): 23}, rep.histogram_cl),
        _exact("omega_ns histogram (6 decimals)", ns_dec, _decimals(rep.histogram_ns)),
        _exact("abs gap histogram total", 68, sum(rep.histogram_abs_gap.values())),
        t,
    ]


# -- 4-5: named games ---------------------------------------------------------

def c4(opts: Options) -> list[Item]:
    expected = {
        "addition": (Fraction(3, 8), Fraction(1, 2)),
        "highest_sdp": (Fraction(4, 9), Fraction(1, 2)),
        "partial_entanglement": (Fraction(4, 9), Fraction(1, 2)),
        "dimension_witness": (Fraction(4, 9), Fraction(1, 2)),
        "symmetric5": (Fraction(10, 25), None),
        "tripartite": (Fraction(3, 8), Fraction(1, 2)),
        "class25": (Fraction(1, 4), Fraction(1, 3)),
    }
    items = []
    for name, (cl, ns) in expected.items():
        f = games.get(name)
        items.append(_exact(f"{name} omega_cl", cl, optimal_classical(f).value))
        if ns is not None:
            items.append(_exact(f"{name} omega_ns", ns, optimal_ns(f).value))
    return items


def c5(opts: Options) -> list[Item]:
    return [
        _close("addition strategy", (2 + math.sqrt(2)) / 8,
               quantum_value(games.get("addition"), addition_strategy()), 1e-12),
        _close("tripartite strategy", math.cos(math.pi / 8) ** 2 / 2,
               quantum_value(games.get("tripartite"), tripartite_strategy()), 1e-12),
        _close("highest-SDP strategy", (1 + 3 / 2 + (math.sqrt(2) + 2) / 2) / 9,
               quantum_value(games.get("highest_sdp"), highest_sdp_strategy()), 1e-12),
    ]


# -- 6: seesaw ----------------------------------------------------------------

def c6(opts: Options) -> list[Item]:
    items = []

    def run(label, fn):
        res, t = _timed(opts, label, 30.0, fn)
        items.append(t)
        return res.value

    g = games.get
    R = opts.r(50)
    v = run("facet (2,2)", lambda: seesaw(g("facet"), (2, 2), restarts=R, seed=opts.seed))
    items.append(_close("facet (2,2)", 0.403093, v, 1e-4))
    v = run("dimension witness (3,3)",
            lambda: seesaw(g("dimension_witness"), (3, 3), restarts=R, seed=opts.seed))
    items.append(_close("dimension witness (3,3)", 4.1547005 / 9, v, 1e-4))
    v = run("dimension witness (2,2)",
            lambda: seesaw(g("dimension_witness"), (2, 2), restarts=R, seed=opts.seed))
    items.append(_at_most("dimension witness (2,2)", 4 / 9, v, 1e-6))
    v = run("partial entanglement (2,2)",
            lambda: seesaw(g("partial_entanglement"), (2, 2), restarts=R, seed=opts.seed))
    items.append(_close("partial entanglement (2,2)", 4.1224 / 9, v, 1e-4))
    v = run("partial entanglement, phi+ fixed",
            lambda: seesaw_fixed_state(g("partial_entanglement"), phi_plus(), restarts=R,
                                       seed=opts.seed))
    items.append(_close("partial entanglement, phi+ fixed", 4.0178 / 9, v, 1e-3))
    v = run("symmetric 5-input (2,2)",
            lambda: seesaw(g("symmetric5"), (2, 2), restarts=R, seed=opts.seed))
    items.append(_close("symmetric 5-input (2,2)", 10.2950849 / 25, v, 1e-4))
    v = run("class25 (2,2,2)",
            lambda: seesaw(g("class25"), (2, 2, 2), restarts=R, seed=opts.seed))
    items.append(_at_most("class25 (2,2,2)", 0.260746, v, 1e-6))
    return items


# -- 7-9 ----------------------------------------------------------------------

def c7(opts: Options) -> list[Item]:
    return [
        _exact("facet game is a facet", True, facet_check(games.get("facet"))),
        _exact("highest-SDP game is a facet", False, facet_check(games.get("highest_sdp"))),
    ]


def c8(opts: Options) -> list[Item]:
    b = games.class25_box()
    f = games.get("class25")
    return [
        _exact("no-signaling", True, is_no_signaling(b)),
        _exact("winning probability", Fraction(1, 3), winning_probability(f, b)),
        _exact("extremal", True, is_extremal(b)),
        _exact("decomposable", False, is_decomposable(b)[0]),
    ]


def c9(opts: Options) -> list[Item]:
    rng = np.random.default_rng(opts.seed)
    items = []
    for n, m in ((2, 2), (3, 2)):
        s = Scenario.uniform(n, m, 2)
        bad = 0
        for _ in range(100):
            f = GameFunction(s, tuple(int(v) for v in rng.integers(0, s.n_outputs, s.n_inputs)))
            if winning_probability(f, parity_box(f)) != Fraction(1, 2 ** (n - 1)):
                bad += 1
        items.append(_exact(f"parity box misses, n={n}, 100 functions", 0, bad))
    err = max(abs(hstar(2.0 ** -n, n) - n) for n in range(1, 5))
    items.append(_close("max |hstar(2^-n, n) - n|, n<=4", 0.0, err, 1e-12))
    curve = [encoding_bound(2, m, 3 / 8).log_fraction_bound for m in range(40, 201)]
    items.append(_exact("bound strictly decreasing for m in 40..200", True,
                        all(b < a for a, b in zip(curve, curve[1:]))))
    items.append(_close("log fraction bound at m=64", -97.0,
                        encoding_bound(2, 64, 3 / 8).log_fraction_bound, 0.5))
    return items


# -- 10: property suites ----------------------------------------------------

def c10(opts: Options) -> list[Item]:
    items = []
    uncertified = [n for n in games.NAMES if not optimal_ns(games.get(n)).certified]
    items.append(_exact("bundled games without LP certificate", [], uncertified))

    rng = np.random.default_rng(opts.seed)
    s = Scenario.parse("2,3,2")
    mismatch = 0
    for _ in range(100):
        f = GameFunction.from_int(s, int(rng.integers(0, s.n_functions)))
        h = apply(random_element(s, rng), f)
        if (optimal_classical(f).value != optimal_classical(h).value
                or optimal_ns(f).value != optimal_ns(h).value):
            mismatch += 1
    items.append(_exact("bound changes under 100 random relabellings", 0, mismatch))

    disorder, non_monotone = [], []
    for name in games.NAMES:
        f = games.get(name)
        dims = (2,) * f.scenario.n_players
        res = seesaw(f, dims, restarts=opts.r(5), seed=opts.seed)
        if any(b < a - 1e-9 for a, b in zip(res.history, res.history[1:])):
            non_monotone.append(name)
        cl, ns = optimal_classical(f).value, optimal_ns(f).value
        if not (float(cl) - 1e-9 <= res.value <= float(ns) + 1e-9):
            disorder.append(name)
    items.append(_exact("seesaw runs with a decreasing step", [], non_monotone))
    items.append(_exact("games violating cl <= q <= ns", [], disorder))
    return items


CRITERIA = [
    Criterion(1, "census 2,2,2", c1, budget=1.0),
    Criterion(2, "census 2,3,2", c2, budget=120.0),
    Criterion(3, "census 3,2,2", c3, budget=600.0),
    Criterion(4, "named-game exact bounds", c4),
    Criterion(5, "explicit quantum strategies", c5),
    Criterion(6, "seesaw reproductions", c6, stochastic=True),
    Criterion(7, "facet check", c7),
    Criterion(8, "class25 box", c8),
    Criterion(9, "counting argument", c9),
    Criterion(10, "property suites", c10, stochastic=True),
]


def run_criterion(c: Criterion, opts: Options | None = None) -> CriterionResult:
    opts = opts or Options()
    t = time.perf_counter()
    items = c.run(opts)
    return CriterionResult(c.number, c.title, items, time.perf_counter() - t, c.budget,
                           c.stochastic)


def format_result(r: CriterionResult, verbose: bool = False) -> str:
    tag = "PASS" if r.passed else "FAIL"
    kind = " [stochastic, retry with more restarts]" if r.stochastic and not r.passed else ""
    lines = [f"{tag} criterion {r.number}: {r.title} ({r.seconds:.1f} s){kind}"]
    for i in r.items:
        if verbose or not i.passed:
            mark = "ok " if i.passed else "BAD"
            tol = f" tol {i.tolerance}" if i.tolerance else ""
            lines.append(f"    {mark} {i.label}: expected {i.expected}, got {i.actual}{tol}")
    if not r.in_time:
        lines.append(f"    BAD runtime {r.seconds:.1f} s exceeds {r.budget:g} s")
    return "\n".join(lines)


def run_all(opts: Options | None = None, only=None, echo=print) -> list[CriterionResult]:
    opts = opts or Options()
    out = []
    for c in CRITERIA:
        if only and c.number not in only:
            continue
        r = run_criterion(c, opts)
        if echo:
            echo(format_result(r, verbose=True))
        out.append(r)
    return out
