"""Scenarios, game functions, boxes and the winning-probability evaluator.

Conventions used everywhere in the package:

* joint inputs and joint outputs are mixed-radix integers with player 1 as
  the least significant digit, so ``x = x_1 + m_1 * x_2 + m_1 m_2 * x_3 ...``;
* a :class:`GameFunction` stores one joint-output index per joint input;
* a :class:`Box` stores ``p(y|x)`` as a ``(n_inputs, n_outputs)`` array, with
  ``Fraction`` objects in exact mode and ``float`` in float mode.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Scenario",
    "GameFunction",
    "Box",
    "DeterministicStrategy",
    "InputDistribution",
    "ScenarioMismatch",
    "encode_input",
    "decode_input",
    "encode_output",
    "decode_output",
    "winning_probability",
    "evaluate_deterministic",
    "parse_table",
    "serialize_table",
    "game_from_document",
    "game_to_document",
]


class ScenarioMismatch(ValueError):
    """Objects that must share a scenario do not."""


def _mixed_radix_encode(digits: Sequence[int], radices: Sequence[int]) -> int:
    if len(digits) != len(radices):
        raise ValueError(f"expected {len(radices)} components, got {len(digits)}")
    index, weight = 0, 1
    for d, r in zip(digits, radices):
        if not 0 <= d < r:
            raise IndexError(f"component {d} out of range [0, {r})")
        index += d * weight
        weight *= r
    return index


def _mixed_radix_decode(index: int, radices: Sequence[int]) -> tuple[int, ...]:
    total = math.prod(radices)
    if not 0 <= index < total:
        raise IndexError(f"index {index} out of range [0, {total})")
    out = []
    for r in radices:
        index, d = divmod(index, r)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True)
class Scenario:
    """Number of players, inputs per player and the common output count."""

    n_players: int
    inputs: tuple[int, ...]
    outputs: int

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(m) for m in self.inputs))
        if self.n_players < 1:
            raise ValueError("need at least one player")
        if len(self.inputs) != self.n_players:
            raise ValueError("one input count per player is required")
        if any(m < 1 for m in self.inputs):
            raise ValueError("every player needs at least one input")
        if self.outputs < 1:
            raise ValueError("need at least one output")

    @classmethod
    def uniform(cls, n_players: int, m_in: int, m_out: int) -> Scenario:
        return cls(n_players, (m_in,) * n_players, m_out)

    @classmethod
    def parse(cls, text: str) -> Scenario:
        """Parse ``"n,m_i,m_o"`` (e.g. ``"2,3,2"``)."""
        try:
            n, mi, mo = (int(t) for t in text.split(","))
        except ValueError:
            raise ValueError(f"scenario must look like 'n,m_i,m_o', got {text!r}") from None
        return cls.uniform(n, mi, mo)

    @property
    def n_inputs(self) -> int:
        """Joint input count."""
        return math.prod(self.inputs)

    @property
    def n_outputs(self) -> int:
        """Joint output count."""
        return self.outputs ** self.n_players

    @property
    def is_symmetric(self) -> bool:
        return len(set(self.inputs)) == 1

    @property
    def n_functions(self) -> int:
        return self.n_outputs ** self.n_inputs

    def input_tuples(self) -> list[tuple[int, ...]]:
        return [decode_input(x, self) for x in range(self.n_inputs)]

    def output_tuples(self) -> list[tuple[int, ...]]:
        return [decode_output(y, self) for y in range(self.n_outputs)]

    def input_digits(self) -> np.ndarray:
        """Array ``(n_inputs, n_players)`` of per-player input components."""
        return np.array(self.input_tuples(), dtype=np.int64).reshape(self.n_inputs, self.n_players)

    def output_digits(self) -> np.ndarray:
        return np.array(self.output_tuples(), dtype=np.int64).reshape(self.n_outputs, self.n_players)

    def __str__(self):
        if self.is_symmetric:
            return f"{self.n_players},{self.inputs[0]},{self.outputs}"
        return f"{self.n_players},{list(self.inputs)},{self.outputs}"


def encode_input(x: Sequence[int], s: Scenario) -> int:
    return _mixed_radix_encode(x, s.inputs)


def decode_input(index: int, s: Scenario) -> tuple[int, ...]:
    return _mixed_radix_decode(index, s.inputs)


def encode_output(y: Sequence[int], s: Scenario) -> int:
    return _mixed_radix_encode(y, (s.outputs,) * s.n_players)


def decode_output(index: int, s: Scenario) -> tuple[int, ...]:
    return _mixed_radix_decode(index, (s.outputs,) * s.n_players)


@dataclass(frozen=True)
class GameFunction:
    """A total function from joint inputs to joint outputs."""

    scenario: Scenario
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        s = self.scenario
        if len(table) != s.n_inputs:
            raise ValueError(f"table has {len(table)} entries, scenario needs {s.n_inputs}")
        if any(not 0 <= v < s.n_outputs for v in table):
            raise ValueError("table entry out of joint-output range")

    @classmethod
    def from_callable(cls, s: Scenario, fn) -> GameFunction:
        """Build from ``fn(x_tuple) -> y_tuple``."""
        return cls(s, tuple(encode_output(fn(x), s) for x in s.input_tuples()))

    @classmethod
    def from_int(cls, s: Scenario, code: int) -> GameFunction:
        return cls(s, _mixed_radix_decode(code, (s.n_outputs,) * s.n_inputs))

    @classmethod
    def constant(cls, s: Scenario, y: Sequence[int] | int = 0) -> GameFunction:
        idx = y if isinstance(y, int) else encode_output(y, s)
        return cls(s, (idx,) * s.n_inputs)

    def to_int(self) -> int:
        """Integer encoding: entry for joint input ``x`` is digit ``x`` in radix ``m_o^n``."""
        base = self.scenario.n_outputs
        code = 0
        for v in reversed(self.table):
            code = code * base + v
        return code

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return decode_output(self.table[encode_input(x, self.scenario)], self.scenario)

    def outputs_of(self, player: int) -> np.ndarray:
        """Player ``player``'s required output for every joint input."""
        s = self.scenario
        return (np.asarray(self.table) // s.outputs ** player) % s.outputs

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)


@dataclass(frozen=True)
class InputDistribution:
    scenario: Scenario
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.scenario.n_inputs:
            raise ValueError("one weight per joint input is required")
        if any(v < 0 for v in w) or sum(w) != 1:
            raise ValueError("input weights must be a probability distribution")

    @classmethod
    def uniform(cls, s: Scenario) -> InputDistribution:
        return cls(s, (Fraction(1, s.n_inputs),) * s.n_inputs)


@dataclass(frozen=True, eq=False)
class Box:
    """Conditional distribution ``p(y|x)``, rows are joint inputs."""

    scenario: Scenario
    entries: np.ndarray
    exact: bool = True

    def __post_init__(self):
        s = self.scenario
        e = np.asarray(self.entries, dtype=object if self.exact else float)
        if e.shape != (s.n_inputs, s.n_outputs):
            raise ValueError(f"box shape {e.shape} does not match {(s.n_inputs, s.n_outputs)}")
        if self.exact:
            e = np.vectorize(Fraction, otypes=[object])(e)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_function(cls, f: GameFunction, weight=1) -> Box:
        s = f.scenario
        e = np.full((s.n_inputs, s.n_outputs), Fraction(0), dtype=object)
        for x, y in enumerate(f.table):
            e[x, y] = Fraction(weight)
        return cls(s, e)

    @classmethod
    def uniform(cls, s: Scenario) -> Box:
        return cls(s, np.full((s.n_inputs, s.n_outputs), Fraction(1, s.n_outputs), dtype=object))

    def is_normalized(self, tol: float = 1e-9) -> bool:
        e = self.entries
        if self.exact:
            return all(v >= 0 for v in e.flat) and all(sum(row) == 1 for row in e)
        return bool((e >= -tol).all() and np.allclose(e.sum(axis=1), 1.0, atol=tol, rtol=0))

    def to_float(self) -> Box:
        return Box(self.scenario, self.entries.astype(float), exact=False)

    def prob(self, y: Sequence[int], x: Sequence[int]):
        s = self.scenario
        return self.entries[encode_input(x, s), encode_output(y, s)]

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        return self.scenario == other.scenario and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.scenario, tuple(self.entries.flat)))

    def mix(self, other: Box, lam) -> Box:
        if other.scenario != self.scenario:
            raise ScenarioMismatch("cannot mix boxes of different scenarios")
        exact = self.exact and other.exact
        lam = Fraction(lam) if exact else float(lam)
        return Box(self.scenario, lam * self.entries + (1 - lam) * other.entries, exact=exact)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per player, the output chosen for each of that player's inputs."""

    scenario: Scenario
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        maps = tuple(tuple(int(v) for v in a) for a in self.maps)
        object.__setattr__(self, "maps", maps)
        s = self.scenario
        if len(maps) != s.n_players:
            raise ValueError("one output map per player is required")
        for a, m in zip(maps, s.inputs):
            if len(a) != m:
                raise ValueError("output map must cover every input of its player")
            if any(not 0 <= v < s.outputs for v in a):
                raise ValueError("output out of range")

    def joint_outputs(self) -> np.ndarray:
        """Joint output index produced on every joint input."""
        s = self.scenario
        digits = s.input_digits()
        out = np.zeros(s.n_inputs, dtype=np.int64)
        for k, a in enumerate(self.maps):
            out += np.asarray(a, dtype=np.int64)[digits[:, k]] * s.outputs ** k
        return out

    def to_box(self) -> Box:
        return Box.from_function(GameFunction(self.scenario, tuple(self.joint_outputs())))

    @classmethod
    def all(cls, s: Scenario) -> Iterable[DeterministicStrategy]:
        """Every strategy tuple, lexicographic in ``(a_1, ..., a_n)``."""
        per_player = [list(itertools.product(range(s.outputs), repeat=m)) for m in s.inputs]
        for maps in itertools.product(*per_player):
            yield cls(s, maps)


def winning_probability(f: GameFunction, b: Box, q: InputDistribution | None = None):
    """Probability that the box outputs ``f(x)``, averaged over ``q`` (uniform by default)."""
    s = f.scenario
    if b.scenario != s:
        raise ScenarioMismatch("game and box scenarios differ")
    if q is not None and q.scenario != s:
        raise ScenarioMismatch("game and input distribution scenarios differ")
    if b.exact:
        if not b.is_normalized():
            raise ValueError("box is not normalized")
        weights = q.weights if q is not None else (Fraction(1, s.n_inputs),) * s.n_inputs
        return sum((w * b.entries[x, y] for x, (w, y) in enumerate(zip(weights, f.table))), Fraction(0))
    hits = b.entries[np.arange(s.n_inputs), f.as_array()]
    if q is None:
        return float(hits.mean())
    return float(np.dot(np.asarray(q.weights, dtype=float), hits))


def evaluate_deterministic(f: GameFunction, d: DeterministicStrategy) -> Fraction:
    if d.scenario != f.scenario:
        raise ScenarioMismatch("game and strategy scenarios differ")
    hits = int(np.count_nonzero(d.joint_outputs() == f.as_array()))
    return Fraction(hits, f.scenario.n_inputs)


# -- text tables -----------------------------------------------------------

_CELL = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*$")


def parse_table(text: str, outputs: int = 2) -> GameFunction:
    """Parse a two-player table: columns are ``x1``, rows ``x2``, cells ``"y2,y1"``.

    Blank lines, lines starting with ``#`` and an optional header line whose
    first token contains a backslash are ignored.  Cells are separated by
    ``|``, ``&`` or runs of two or more spaces; a leading row label ending in
    ``:`` or ``|`` is allowed.
    """
    rows = []
    for raw in text.splitlines():
        line = raw.strip().rstrip("\\").strip()
        if not line or line.startswith("#") or "\\" in line.split()[0]:
            continue
        line = re.sub(r"^\d+\s*[:|&]", "", line)
        cells = [c for c in re.split(r"\s*[|&]\s*|\s{2,}|\t", line.strip()) if c]
        parsed = []
        for c in cells:
            m = _CELL.match(c)
            if not m:
                raise ValueError(f"malformed cell {c!r}")
            y2, y1 = int(m.group(1)), int(m.group(2))
            if y1 >= outputs or y2 >= outputs:
                raise ValueError(f"cell {c!r} uses an output outside [0, {outputs})")
            parsed.append((y1, y2))
        rows.append(parsed)
    if not rows:
        raise ValueError("empty table")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("inconsistent row lengths")
    s = Scenario(2, (width, len(rows)), outputs)
    table = [0] * s.n_inputs
    for x2, row in enumerate(rows):
        for x1, y in enumerate(row):
            table[encode_input((x1, x2), s)] = encode_output(y, s)
    return GameFunction(s, tuple(table))


def serialize_table(f: GameFunction) -> str:
    s = f.scenario
    if s.n_players != 2:
        raise ValueError("text tables are only defined for two players")
    m1, m2 = s.inputs
    lines = ["x2\\x1 (y2,y1) | " + " | ".join(str(x1) for x1 in range(m1))]
    for x2 in range(m2):
        cells = []
        for x1 in range(m1):
            y1, y2 = f((x1, x2))
            cells.append(f"{y2},{y1}")
        lines.append(f"{x2}: " + " | ".join(cells))
    return "\n".join(lines) + "\n"


# -- structured documents --------------------------------------------------

def game_to_document(f: GameFunction, name: str | None = None) -> dict:
    s = f.scenario
    doc = {
        "players": s.n_players,
        "inputs": list(s.inputs),
        "outputs": s.outputs,
        "table": [list(decode_output(y, s)) for y in f.table],
    }
    if name:
        doc = {"name": name, **doc}
    return doc


def game_from_document(doc: dict) -> GameFunction:
    try:
        s = Scenario(int(doc["players"]), tuple(doc["inputs"]), int(doc["outputs"]))
        entries = doc["table"]
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed game document: {e}") from None
    if len(entries) != s.n_inputs:
        raise ValueError(f"table has {len(entries)} rows, scenario needs {s.n_inputs}")
    table = []
    for y in entries:
        if len(y) != s.n_players:
            raise ValueError(f"table entry {y} must list one output per player")
        table.append(encode_output(tuple(int(v) for v in y), s))
    return GameFunction(s, tuple(table))
