"""Optimal no-signaling value and geometry of the no-signaling polytope.

Box variables are ordered ``v = x * n_outputs + y``.  The equality system
holds one normalisation row per joint input and, for every player ``k``, rows
stating that the marginal of the other players,
``sum_{y_k} p(y | x_k, x_rest)``, does not depend on ``x_k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .game import Box, GameFunction, Scenario, encode_input, encode_output, winning_probability
from .classical import strategy_outputs
from .simplex import ExactLP, LPResult, check_certificate

__all__ = [
    "NSConstraintSystem",
    "NSResult",
    "CertificateError",
    "build_constraints",
    "optimal_ns",
    "is_no_signaling",
    "is_extremal",
    "is_decomposable",
    "exact_rank",
    "pr_box",
    "facet_check",
    "FacetReport",
]


class CertificateError(ArithmeticError):
    """The LP solution failed its exact optimality certificate."""


@dataclass(frozen=True, eq=False)
class NSConstraintSystem:
    scenario: Scenario
    A: np.ndarray
    b: np.ndarray
    n_normalization: int

    @property
    def n_vars(self) -> int:
        return self.A.shape[1]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def satisfied_by(self, b: Box) -> bool:
        v = np.asarray(b.entries, dtype=object).reshape(-1)
        return all(lhs == rhs for lhs, rhs in zip(self.A.astype(object).dot(v), self.b))


def _signaling_rows(s: Scenario):
    """Yield ``(plus, minus)`` variable lists whose sums must agree."""
    M = s.n_outputs
    for k in range(s.n_players):
        rest = [j for j in range(s.n_players) if j != k]
        rest_in = [range(s.inputs[j]) for j in rest]
        rest_out = [range(s.outputs) for _ in rest]
        for xr in itertools.product(*rest_in):
            for yr in itertools.product(*rest_out):
                def cell_vars(xk):
                    out = []
                    for yk in range(s.outputs):
                        x = [0] * s.n_players
                        y = [0] * s.n_players
                        x[k], y[k] = xk, yk
                        for j, xj, yj in zip(rest, xr, yr):
                            x[j], y[j] = xj, yj
                        out.append(encode_input(x, s) * M + encode_output(y, s))
                    return out
                base = cell_vars(0)
                for xk in range(1, s.inputs[k]):
                    yield base, cell_vars(xk)


@lru_cache(maxsize=None)
def build_constraints(s: Scenario) -> NSConstraintSystem:
    J, M = s.n_inputs, s.n_outputs
    rows = []
    for x in range(J):
        r = np.zeros(J * M, dtype=np.int64)
        r[x * M:(x + 1) * M] = 1
        rows.append(r)
    for plus, minus in _signaling_rows(s):
        r = np.zeros(J * M, dtype=np.int64)
        r[plus] += 1
        r[minus] -= 1
        rows.append(r)
    A = np.array(rows, dtype=np.int64)
    b = np.zeros(len(rows), dtype=np.int64)
    b[:J] = 1
    A.setflags(write=False)
    b.setflags(write=False)
    return NSConstraintSystem(s, A, b, J)


@lru_cache(maxsize=None)
def _lp(s: Scenario) -> ExactLP:
    cs = build_constraints(s)
    return ExactLP(cs.A, cs.b)


@dataclass(frozen=True)
class NSResult:
    value: Fraction
    witness: Box
    lp: LPResult
    certified: bool


def objective(f: GameFunction) -> np.ndarray:
    """Indicator of the winning cells ``(x, f(x))``."""
    s = f.scenario
    c = np.zeros(s.n_inputs * s.n_outputs, dtype=np.int64)
    c[np.arange(s.n_inputs) * s.n_outputs + f.as_array()] = 1
    return c


def optimal_ns(f: GameFunction, certify: bool = True) -> NSResult:
    """Exact maximum winning probability over no-signaling boxes.

    The witness is the basic optimal solution reached by Bland's rule; with
    ``certify`` the primal/dual pair is verified exactly and a failure raises
    :class:`CertificateError`.
    """
    s = f.scenario
    cs = build_constraints(s)
    c = objective(f)
    res = _lp(s).maximize(c)
    ok = check_certificate(cs.A, cs.b, c, res) if certify else False
    if certify and not ok:
        raise CertificateError("no-signaling LP failed its optimality certificate")
    witness = Box(s, np.array(res.x, dtype=object).reshape(s.n_inputs, s.n_outputs))
    return NSResult(res.value / s.n_inputs, witness, res, ok)


def is_no_signaling(b: Box, tol: float = 1e-9) -> bool:
    """Exact check in exact mode; ``tol``-approximate for float boxes."""
    s = b.scenario
    e = b.entries.reshape(-1)
    for plus, minus in _signaling_rows(s):
        lhs = sum(e[plus]) - sum(e[minus])
        if b.exact:
            if lhs != 0:
                return False
        elif abs(lhs) > tol:
            return False
    return True


def exact_rank(rows) -> int:
    """Rank over the rationals by fraction Gaussian elimination."""
    mat = [[Fraction(v) for v in r] for r in rows]
    if not mat:
        return 0
    rank, ncols = 0, len(mat[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pr = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                factor = mat[i][c] / pr[c]
                mat[i] = [a - factor * p for a, p in zip(mat[i], pr)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def is_extremal(b: Box) -> bool:
    """Vertex test: equality rows plus tight nonnegativity rows have full rank.

    Tight rows pin every variable off the support, so this is the same as the
    equality-system columns on the support being linearly independent.
    """
    if not b.exact:
        raise ValueError("extremality is decided on exact boxes only")
    cs = build_constraints(b.scenario)
    if not b.is_normalized() or not cs.satisfied_by(b):
        raise ValueError("box is not a feasible no-signaling box")
    support = [i for i, v in enumerate(b.entries.reshape(-1)) if v != 0]
    cols = cs.A[:, support].T
    return exact_rank(cols.tolist()) == len(support)


def pr_box(s: Scenario | None = None, players=(0, 1)) -> Box:
    """PR box ``y_i xor y_j = x_i and x_j`` on two binary players of ``s``.

    Any further players output 0 deterministically.
    """
    s = s or Scenario.uniform(2, 2, 2)
    i, j = players
    e = np.full((s.n_inputs, s.n_outputs), Fraction(0), dtype=object)
    for x in s.input_tuples():
        for y in s.output_tuples():
            others_zero = all(y[k] == 0 for k in range(s.n_players) if k not in (i, j))
            if others_zero and (y[i] ^ y[j]) == (x[i] & x[j]):
                e[encode_input(x, s), encode_output(y, s)] = Fraction(1, 2)
    return Box(s, e)


@dataclass(frozen=True)
class Decomposition:
    pair: tuple[int, int]
    single: int
    local_outputs: tuple[int, ...]
    bipartite: np.ndarray  # p(y_i, y_j | x_i, x_j) indexed [x_i, x_j, y_i, y_j]


def is_decomposable(b: Box) -> tuple[bool, Decomposition | None]:
    """Is a 3-player box a bipartite box times a deterministic third player?"""
    s = b.scenario
    if s.n_players != 3:
        raise ValueError("decomposability is defined for three players")
    if not b.exact:
        raise ValueError("decomposability is decided on exact boxes only")
    e = b.entries
    for single in (2, 1, 0):
        i, j = [k for k in range(3) if k != single]
        for outs in itertools.product(range(s.outputs), repeat=s.inputs[single]):
            bip = np.full((s.inputs[i], s.inputs[j], s.outputs, s.outputs), Fraction(0), dtype=object)
            for xi, xj, yi, yj in itertools.product(range(s.inputs[i]), range(s.inputs[j]),
                                                    range(s.outputs), range(s.outputs)):
                x = [0, 0, 0]
                y = [0, 0, 0]
                x[i], x[j], y[i], y[j] = xi, xj, yi, yj
                y[single] = outs[0]
                bip[xi, xj, yi, yj] = e[encode_input(x, s), encode_output(y, s)]
            ok = True
            for x in s.input_tuples():
                for y in s.output_tuples():
                    want = bip[x[i], x[j], y[i], y[j]] if y[single] == outs[x[single]] else 0
                    if e[encode_input(x, s), encode_output(y, s)] != want:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True, Decomposition((i, j), single, outs, bip)
    return False, None


@dataclass(frozen=True)
class FacetReport:
    polytope_dim: int
    face_dim: int
    optimal_vertices: int

    @property
    def is_facet(self) -> bool:
        return self.face_dim == self.polytope_dim - 1


def _affine_dim(points: np.ndarray) -> int:
    if len(points) == 0:
        return -1
    lifted = np.hstack([points, np.ones((len(points), 1), dtype=points.dtype)])
    return exact_rank(lifted.tolist()) - 1


def facet_report(f: GameFunction) -> FacetReport:
    """Affine dimensions of the local polytope and of its face maximising ``f``."""
    s = f.scenario
    S, _ = strategy_outputs(s)
    M = s.n_outputs
    # each deterministic strategy as a 0/1 box vector over (x, y) cells
    boxes = np.zeros((len(S), s.n_inputs * M), dtype=np.int64)
    rows = np.repeat(np.arange(len(S)), s.n_inputs)
    boxes[rows, (np.arange(s.n_inputs)[None, :] * M + S).reshape(-1)] = 1
    # distinct columns are enough for the rank; dedupe to keep elimination small
    boxes = np.unique(boxes, axis=0)
    wins = boxes[:, np.arange(s.n_inputs) * M + f.as_array()].sum(axis=1)
    best = boxes[wins == wins.max()]
    return FacetReport(_affine_dim(boxes), _affine_dim(best), len(best))


def facet_check(f: GameFunction) -> bool:
    """Does ``omega(f) <= omega_cl`` define a facet of the local polytope?"""
    return facet_report(f).is_facet
