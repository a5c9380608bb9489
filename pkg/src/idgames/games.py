"""Named games used throughout the tests and bundled with the CLI."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from .game import Box, GameFunction, Scenario, game_from_document, game_to_document, parse_table

# Two-player tables: columns x1, rows x2, cells "y2,y1".
_TABLES = {
    "highest_sdp": """
        0,0 | 0,0 | 0,0
        0,0 | 1,1 | 1,1
        0,1 | 0,1 | 1,1
    """,
    "symmetric3": """
        0,0 | 0,0 | 1,0
        0,0 | 1,1 | 1,1
        0,1 | 1,1 | 0,0
    """,
    "partial_entanglement": """
        0,1 | 1,1 | 1,0
        0,0 | 0,1 | 1,1
        0,1 | 1,0 | 0,1
    """,
    "dimension_witness": """
        0,1 | 1,1 | 1,0
        0,1 | 1,1 | 1,1
        0,1 | 1,0 | 1,0
    """,
    "addition": """
        0,0 | 0,1 | 1,0 | 1,1
        0,1 | 1,0 | 1,1 | 0,0
        1,0 | 1,1 | 0,0 | 0,1
        1,1 | 0,0 | 0,1 | 1,0
    """,
    "facet": """
        0,1 | 1,0 | 0,0 | 1,0
        0,1 | 1,1 | 0,1 | 1,1
        0,0 | 1,1 | 0,0 | 1,0
        0,0 | 1,0 | 1,0 | 0,0
    """,
    "symmetric5": """
        1,1 | 1,0 | 0,0 | 0,0 | 1,1
        0,1 | 0,0 | 0,1 | 1,1 | 1,1
        0,0 | 1,0 | 0,0 | 1,1 | 0,1
        0,0 | 1,1 | 1,1 | 0,0 | 0,0
        1,1 | 1,1 | 1,0 | 0,0 | 0,0
    """,
}

THREE_PLAYER = Scenario.uniform(3, 2, 2)


def _tripartite(x):
    x1, x2, x3 = x
    n1, n2, n3 = 1 - x1, 1 - x2, 1 - x3
    return ((n1 & n2) ^ n3, n3, 0)


def _class25(x):
    x1, x2, x3 = x
    n1, n2, n3 = 1 - x1, 1 - x2, 1 - x3
    return (n3, n3, (n3 & n1) | (x3 & n2))


# optimal no-signaling box for class25; rows x3x2x1, columns y3y2y1 = 000..111
_CLASS25_BOX = """
    000: 1/3 0 1/3 0   0   0 0   1/3
    001: 1/3 0 0   1/3 0   0 1/3 0
    010: 1/3 0 1/3 0   0   0 0   1/3
    011: 1/3 0 0   1/3 0   0 1/3 0
    100: 0   0 1/3 1/3 1/3 0 0   0
    101: 0   0 1/3 1/3 1/3 0 0   0
    110: 1/3 0 0   1/3 0   0 1/3 0
    111: 1/3 0 0   1/3 0   0 1/3 0
"""


def class25_box() -> Box:
    """The published optimal box for the class25 game, as an exact box."""
    e = np.full((8, 8), Fraction(0), dtype=object)
    for line in _CLASS25_BOX.strip().splitlines():
        label, cells = line.split(":")
        # bit strings read x3 x2 x1, so player 1 is the least significant bit
        e[int(label, 2)] = [Fraction(c) for c in cells.split()]
    return Box(THREE_PLAYER, e)


def _build() -> dict[str, GameFunction]:
    out = {name: parse_table(text) for name, text in _TABLES.items()}
    out["tripartite"] = GameFunction.from_callable(THREE_PLAYER, _tripartite)
    out["class25"] = GameFunction.from_callable(THREE_PLAYER, _class25)
    return out


NAMES = (
    "highest_sdp",
    "symmetric3",
    "partial_entanglement",
    "dimension_witness",
    "addition",
    "facet",
    "symmetric5",
    "tripartite",
    "class25",
)


@lru_cache(maxsize=None)
def _all() -> dict[str, GameFunction]:
    return _build()


def get(name: str) -> GameFunction:
    try:
        return _all()[name]
    except KeyError:
        raise KeyError(f"unknown game {name!r}; known: {', '.join(NAMES)}") from None


def load_bundled(name: str) -> GameFunction:
    """Read a game from the JSON files shipped in ``idgames/data``."""
    text = resources.files("idgames").joinpath("data", f"{name}.json").read_text()
    return game_from_document(json.loads(text))


def write_bundled(directory) -> None:
    """Regenerate the bundled JSON files (maintenance helper)."""
    from pathlib import Path

    directory = Path(directory)
    for name in NAMES:
        doc = game_to_document(get(name), name=name)
        head = {k: v for k, v in doc.items() if k != "table"}
        rows = ",\n  ".join(json.dumps(y) for y in doc["table"])
        text = json.dumps(head)[:-1] + ',\n "table": [\n  ' + rows + "\n ]\n}\n"
        (directory / f"{name}.json").write_text(text)
