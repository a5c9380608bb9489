"""Relabelling symmetries of identity games and the class census.

A :class:`RelabellingElement` bundles a permutation of every player's inputs,
a bijective output relabelling per (player, input) and a permutation of the
players.  Acting on ``f`` it produces ``f'`` with

    f'(x')_k = sigma[tau[k]][x'_k]( f(z)_{tau[k]} ),   z_j = pi[j][ x'_{tau^-1[j]} ]

so new player ``k`` plays the role of old player ``tau[k]``.  Every element
also has a *flat* form ``(src, out)`` on joint indices,
``f'(x) = out[x, f(src[x])]``, which is what the census uses.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .game import GameFunction, Scenario

__all__ = [
    "RelabellingElement",
    "EquivalenceClass",
    "GroupTooLarge",
    "apply",
    "compose",
    "group_order",
    "group_elements",
    "random_element",
    "orbit",
    "orbit_codes",
    "canonical_form",
    "enumerate_classes",
    "group_table",
    "classes_to_document",
    "classes_from_document",
]

# explicit orbits materialise one image per element
MAX_EXPLICIT_GROUP = 200_000
MAX_BITMAP_FUNCTIONS = 2**32


class GroupTooLarge(ValueError):
    pass


def _check_perm(p, n, what):
    if sorted(p) != list(range(n)):
        raise ValueError(f"{what} {p} is not a bijection on range({n})")


@dataclass(frozen=True)
class RelabellingElement:
    scenario: Scenario
    input_perms: tuple[tuple[int, ...], ...]
    output_maps: tuple[tuple[tuple[int, ...], ...], ...]
    player_perm: tuple[int, ...]

    def __post_init__(self):
        s = self.scenario
        ip = tuple(tuple(p) for p in self.input_perms)
        om = tuple(tuple(tuple(o) for o in per_input) for per_input in self.output_maps)
        pp = tuple(self.player_perm)
        object.__setattr__(self, "input_perms", ip)
        object.__setattr__(self, "output_maps", om)
        object.__setattr__(self, "player_perm", pp)
        if len(ip) != s.n_players or len(om) != s.n_players:
            raise ValueError("one input permutation and output map list per player")
        _check_perm(pp, s.n_players, "player permutation")
        for k in range(s.n_players):
            _check_perm(ip[k], s.inputs[k], "input permutation")
            if len(om[k]) != s.inputs[k]:
                raise ValueError("one output permutation per input")
            for o in om[k]:
                _check_perm(o, s.outputs, "output relabelling")
            if s.inputs[pp[k]] != s.inputs[k]:
                raise ValueError("players with different input counts cannot be exchanged")

    @classmethod
    def identity(cls, s: Scenario) -> RelabellingElement:
        return cls(
            s,
            tuple(tuple(range(m)) for m in s.inputs),
            tuple(tuple(tuple(range(s.outputs)) for _ in range(m)) for m in s.inputs),
            tuple(range(s.n_players)),
        )

    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        """``(src, out)`` with ``f'(x) = out[x, f(src[x])]`` on joint indices."""
        s = self.scenario
        n, mo = s.n_players, s.outputs
        xd = s.input_digits()
        yd = s.output_digits()
        tau = self.player_perm
        tau_inv = [0] * n
        for k, t in enumerate(tau):
            tau_inv[t] = k
        in_w = np.cumprod((1,) + s.inputs[:-1])
        src = np.zeros(s.n_inputs, dtype=np.int64)
        for j in range(n):
            pj = np.asarray(self.input_perms[j], dtype=np.int64)
            src += pj[xd[:, tau_inv[j]]] * in_w[j]
        out = np.zeros((s.n_inputs, s.n_outputs), dtype=np.int64)
        for k in range(n):
            sig = np.asarray(self.output_maps[tau[k]], dtype=np.int64)  # (m, mo)
            new_digit = sig[xd[:, k][:, None], yd[:, tau[k]][None, :]]
            out += new_digit * mo**k
        return src, out


def apply(g: RelabellingElement, f: GameFunction) -> GameFunction:
    if g.scenario != f.scenario:
        raise ValueError("element and function live in different scenarios")
    src, out = g.flat()
    t = f.as_array()
    return GameFunction(f.scenario, tuple(out[np.arange(len(t)), t[src]]))


def compose(g2: RelabellingElement, g1: RelabellingElement) -> RelabellingElement:
    """Element acting as ``g1`` followed by ``g2``."""
    s = g1.scenario
    n = s.n_players
    t1, t2 = g1.player_perm, g2.player_perm
    tau = tuple(t1[t2[k]] for k in range(n))
    # move g2's local part past g1's player permutation
    pi_c = [None] * n
    sig_c = [None] * n
    for k in range(n):
        pi_c[t1[k]] = g2.input_perms[k]
        sig_c[t1[k]] = g2.output_maps[k]
    pis, sigs = [], []
    for j in range(n):
        p1, pc = g1.input_perms[j], pi_c[j]
        pis.append(tuple(p1[pc[x]] for x in range(s.inputs[j])))
        sigs.append(tuple(
            tuple(sig_c[j][x][v] for v in g1.output_maps[j][pc[x]])
            for x in range(s.inputs[j])
        ))
    return RelabellingElement(s, tuple(pis), tuple(sigs), tau)


def group_order(s: Scenario) -> int:
    local = math.prod(math.factorial(m) * math.factorial(s.outputs) ** m for m in s.inputs)
    swaps = math.prod(math.factorial(c) for c in Counter(s.inputs).values())
    return local * swaps


def _player_perms(s: Scenario):
    for p in itertools.permutations(range(s.n_players)):
        if all(s.inputs[p[k]] == s.inputs[k] for k in range(s.n_players)):
            yield p


def group_elements(s: Scenario) -> Iterator[RelabellingElement]:
    out_perms = list(itertools.permutations(range(s.outputs)))
    in_perms = [list(itertools.permutations(range(m))) for m in s.inputs]
    out_maps = [list(itertools.product(out_perms, repeat=m)) for m in s.inputs]
    for tau in _player_perms(s):
        for pis in itertools.product(*in_perms):
            for sigs in itertools.product(*out_maps):
                yield RelabellingElement(s, pis, sigs, tau)


def random_element(s: Scenario, rng: np.random.Generator) -> RelabellingElement:
    taus = list(_player_perms(s))
    tau = taus[rng.integers(len(taus))]
    pis = tuple(tuple(int(v) for v in rng.permutation(m)) for m in s.inputs)
    sigs = tuple(
        tuple(tuple(int(v) for v in rng.permutation(s.outputs)) for _ in range(m))
        for m in s.inputs
    )
    return RelabellingElement(s, pis, sigs, tau)


def _group_table(s: Scenario) -> np.ndarray:
    """``T[g, x, v]``: contribution to the image code when ``f(x) = v``.

    The image of ``f`` under element ``g`` has integer code
    ``sum_x T[g, x, f(x)]``.
    """
    order = group_order(s)
    if order > MAX_EXPLICIT_GROUP:
        raise GroupTooLarge(f"group of order {order} is too large for explicit orbits")
    J, M = s.n_inputs, s.n_outputs
    place = np.array([M**x for x in range(J)], dtype=np.int64)
    T = np.empty((order, J, M), dtype=np.int64)
    rows = np.arange(J)
    for i, g in enumerate(group_elements(s)):
        src, out = g.flat()
        # image digit at position x' comes from f(src[x']); re-index by source position
        T[i, src, :] = out * place[:, None]
    return T


_TABLE_CACHE: dict[Scenario, np.ndarray] = {}


def group_table(s: Scenario) -> np.ndarray:
    if s not in _TABLE_CACHE:
        _TABLE_CACHE[s] = _group_table(s)
    return _TABLE_CACHE[s]


def _digits(code: int, s: Scenario) -> np.ndarray:
    M = s.n_outputs
    return np.array([(code // M**x) % M for x in range(s.n_inputs)], dtype=np.int64)


def orbit_codes(f: GameFunction) -> np.ndarray:
    """Sorted integer codes of every function equivalent to ``f``."""
    T = group_table(f.scenario)
    images = T[:, np.arange(f.scenario.n_inputs), f.as_array()].sum(axis=1)
    return np.unique(images)


def orbit(f: GameFunction) -> frozenset[GameFunction]:
    return frozenset(GameFunction.from_int(f.scenario, int(c)) for c in orbit_codes(f))


def canonical_form(f: GameFunction) -> GameFunction:
    """Orbit member with the smallest integer code."""
    return GameFunction.from_int(f.scenario, int(orbit_codes(f)[0]))


@dataclass(frozen=True)
class EquivalenceClass:
    representative: GameFunction
    orbit_size: int

    @property
    def code(self) -> int:
        return self.representative.to_int()


def enumerate_classes(s: Scenario, chunk: int = 1 << 16) -> list[EquivalenceClass]:
    """Partition the whole function space of ``s`` into relabelling classes.

    Walks a visited bitmap in increasing code order; the first unvisited code
    is necessarily the minimum of its orbit, which is then marked in full.
    """
    total = s.n_functions
    if total > MAX_BITMAP_FUNCTIONS:
        raise GroupTooLarge(f"{total} functions do not fit the census bitmap")
    T = group_table(s)
    J, M = s.n_inputs, s.n_outputs
    place = np.array([M**x for x in range(J)], dtype=np.int64)
    cols = np.arange(J)
    visited = np.zeros(total, dtype=bool)
    classes = []
    ptr = 0
    while ptr < total:
        window = visited[ptr:ptr + chunk]
        free = np.flatnonzero(~window)
        if free.size == 0:
            ptr += chunk
            continue
        code = ptr + int(free[0])
        digits = (code // place) % M
        images = np.unique(T[:, cols, digits].sum(axis=1))
        assert images[0] == code, "orbit walk reached a non-minimal seed"
        visited[images] = True
        classes.append(EquivalenceClass(GameFunction.from_int(s, code), int(images.size)))
        ptr = code + 1
    return classes


def classes_to_document(s: Scenario, classes: list[EquivalenceClass]) -> dict:
    return {
        "scenario": str(s),
        "total_functions": s.n_functions,
        "group_order": group_order(s),
        "classes": [[c.code, c.orbit_size] for c in classes],
    }


def classes_from_document(doc: dict) -> list[EquivalenceClass]:
    s = Scenario.parse(doc["scenario"])
    return [EquivalenceClass(GameFunction.from_int(s, code), size) for code, size in doc["classes"]]
