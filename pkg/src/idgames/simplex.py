"""Exact simplex for ``max c.x  s.t.  A x = b, x >= 0`` with integer data.

The tableau is kept fraction-free: every entry is an integer and the true
tableau is ``T / d`` where ``d`` is the last pivot (integer pivoting in the
style of Bareiss/Edmonds).  Divisions in the update are exact, so no rounding
ever happens.  Entries live in ``int64`` while they are small and switch to
Python integers (``dtype=object``) if they grow.

Pivoting follows Bland's rule in both phases.  Phase 1 starts from the
all-artificial basis and only depends on ``(A, b)``, so :class:`ExactLP`
runs it once and reuses the feasible basis for every objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["ExactLP", "LPResult", "Infeasible", "Unbounded", "check_certificate"]

_INT64_GUARD = 1 << 30


class Infeasible(ArithmeticError):
    pass


class Unbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    basis: tuple[int, ...]
    pivots: int


class _Tableau:
    """Constraint rows ``[A | I | b]`` plus an objective row, all scaled by ``d``."""

    def __init__(self, A: np.ndarray, b: np.ndarray):
        m, n = A.shape
        self.m, self.n = m, n
        T = np.zeros((m + 1, n + m + 1), dtype=np.int64)
        T[:m, :n] = A
        T[:m, n:n + m] = np.eye(m, dtype=np.int64)
        T[:m, -1] = b
        self.T = T
        self.d = 1
        self.basis = list(range(n, n + m))
        self.rows = list(range(m))  # original row id of each tableau row
        self.pivots = 0

    def copy(self) -> _Tableau:
        t = object.__new__(_Tableau)
        t.m, t.n = self.m, self.n
        t.T = self.T.copy()
        t.d = self.d
        t.basis = list(self.basis)
        t.rows = list(self.rows)
        t.pivots = self.pivots
        return t

    def _widen_if_needed(self):
        if self.T.dtype != object and np.abs(self.T).max() >= _INT64_GUARD:
            self.T = self.T.astype(object)

    def pivot(self, r: int, c: int):
        T = self.T
        if T[r, c] < 0:
            T[r] *= -1
        p = T[r, c]
        pivot_row = T[r].copy()
        col = T[:, c].copy()
        if T.dtype == object:
            d = self.d
            for i in range(len(T)):
                if i != r:
                    T[i] = (p * T[i] - col[i] * pivot_row) // d
        else:
            T[:] = (p * T - np.outer(col, pivot_row)) // self.d
            T[r] = pivot_row
        self.d = int(p)
        self.basis[r] = c
        self.pivots += 1
        self._widen_if_needed()

    def entering(self, allowed: int) -> int | None:
        """Bland: lowest-index column with negative reduced cost."""
        z = self.T[-1, :allowed]
        neg = np.flatnonzero(z < 0)
        return int(neg[0]) if neg.size else None

    def leaving(self, c: int) -> int | None:
        """Minimum ratio row; ties go to the lowest basic variable index."""
        T = self.T
        best = None
        for i in np.flatnonzero(T[:-1, c] > 0):
            i = int(i)
            a, rhs = int(T[i, c]), int(T[i, -1])
            if best is None:
                best = (i, a, rhs)
                continue
            _, ba, brhs = best
            lhs, rhs_cmp = rhs * ba, brhs * a
            if lhs < rhs_cmp or (lhs == rhs_cmp and self.basis[i] < self.basis[best[0]]):
                best = (i, a, rhs)
        return None if best is None else best[0]

    def run(self, allowed: int, max_pivots: int | None = None):
        while True:
            if max_pivots is not None and self.pivots >= max_pivots:
                return
            c = self.entering(allowed)
            if c is None:
                return
            r = self.leaving(c)
            if r is None:
                raise Unbounded("objective is unbounded")
            self.pivot(r, c)

    def set_objective(self, c: np.ndarray):
        """Objective row ``d * (c_B B^-1 [A|I|b] - [c|0|0])``."""
        T = self.T
        row = np.zeros(T.shape[1], dtype=T.dtype)
        row[:self.n] = -np.asarray(c, dtype=np.int64) * self.d
        for i, j in enumerate(self.basis):
            cj = int(c[j]) if j < self.n else 0
            if cj:
                row = row + cj * T[i]
        T[-1] = row

    def drop_row(self, i: int):
        self.T = np.delete(self.T, i, axis=0)
        del self.basis[i]
        del self.rows[i]


class ExactLP:
    """Feasible region ``{x : A x = b, x >= 0}`` with exact optimisation.

    ``A`` and ``b`` must be integer with ``b >= 0``.  Phase 1 runs on
    construction; each :meth:`maximize` call runs phase 2 from that basis.
    """

    def __init__(self, A, b, max_pivots: int | None = None):
        A = np.asarray(A, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if (b < 0).any():
            raise ValueError("right-hand side must be nonnegative")
        self.A, self.b = A, b
        self.max_pivots = max_pivots
        m, n = A.shape
        tab = _Tableau(A, b)
        # maximise minus the sum of artificials; their own reduced costs vanish
        tab.T[-1, :n] = -A.sum(axis=0)
        tab.T[-1, -1] = -b.sum()
        tab.run(n + m, max_pivots)
        if tab.T[-1, -1] != 0:
            raise Infeasible("constraint system has no nonnegative solution")
        self._drive_out_artificials(tab)
        self.phase1_pivots = tab.pivots
        self._tab = tab

    @staticmethod
    def _drive_out_artificials(tab: _Tableau):
        n = tab.n
        i = 0
        while i < len(tab.basis):
            if tab.basis[i] < n:
                i += 1
                continue
            nz = np.flatnonzero(tab.T[i, :n] != 0)
            if nz.size:
                tab.pivot(i, int(nz[0]))
                i += 1
            else:
                tab.drop_row(i)

    @property
    def n_vars(self) -> int:
        return self.A.shape[1]

    @property
    def rank(self) -> int:
        return len(self._tab.basis)

    def maximize(self, c) -> LPResult:
        c = np.asarray(c, dtype=np.int64)
        tab = self._tab.copy()
        tab.pivots = 0
        tab.set_objective(c)
        tab.run(tab.n, self.max_pivots)
        T, d, n, m = tab.T, tab.d, tab.n, tab.m
        x = [Fraction(0)] * n
        for i, j in enumerate(tab.basis):
            x[j] = Fraction(int(T[i, -1]), d)
        dual = tuple(Fraction(int(v), d) for v in T[-1, n:n + m])
        value = Fraction(int(T[-1, -1]), d)
        return LPResult(value, tuple(x), dual, tuple(tab.basis), tab.pivots)


def _common_scale(values) -> tuple[int, list[int]]:
    """``(d, [v * d])`` with ``d`` the lcm of the denominators."""
    fr = [Fraction(v) for v in values]
    d = math.lcm(*(v.denominator for v in fr)) if fr else 1
    return d, [v.numerator * (d // v.denominator) for v in fr]


def check_certificate(A, b, c, res: LPResult) -> bool:
    """Exact optimality check for ``max c.x, A x = b, x >= 0``.

    Verifies primal feasibility, dual feasibility ``A^T y >= c`` and equal
    objective values, using only the original data.  Vectors are scaled to
    integers first so the products run on plain ints.
    """
    A = np.asarray(A, dtype=object)
    b = [int(v) for v in b]
    c = [int(v) for v in c]
    dx, X = _common_scale(res.x)
    dy, Y = _common_scale(res.dual)
    if any(v < 0 for v in X):
        return False
    if any(lhs != rhs * dx for lhs, rhs in zip(A.dot(np.array(X, dtype=object)), b)):
        return False
    if any(lhs < ci * dy for lhs, ci in zip(A.T.dot(np.array(Y, dtype=object)), c)):
        return False
    primal = Fraction(sum(ci * xi for ci, xi in zip(c, X)), dx)
    dual = Fraction(sum(bi * yi for bi, yi in zip(b, Y)), dy)
    return primal == dual == res.value
