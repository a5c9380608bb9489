import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from idgames import simplex
from idgames.simplex import ExactLP, Infeasible, Unbounded, check_certificate


def solve_square(B, b):
    """Exact solution of ``B z = b`` or None when singular."""
    n = len(B)
    M = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(B, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for i in range(n):
            if i != c and M[i][c] != 0:
                k = M[i][c] / M[c][c]
                M[i] = [a - k * p for a, p in zip(M[i], M[c])]
    return [M[i][-1] / M[i][i] for i in range(n)]


def brute_force_max(A, b, c):
    """Best objective over all basic feasible solutions (full row rank A)."""
    m, n = A.shape
    best = None
    for cols in itertools.combinations(range(n), m):
        z = solve_square(A[:, cols].tolist(), b.tolist())
        if z is None or any(v < 0 for v in z):
            continue
        val = sum(Fraction(int(c[j])) * v for j, v in zip(cols, z))
        best = val if best is None else max(best, val)
    return best


@st.composite
def bounded_lps(draw):
    """``A x + s = b`` with a simplex-like sum row, so the region is a nonempty polytope."""
    m = draw(st.integers(1, 3))
    n = draw(st.integers(1, 4))
    rows = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)]
    rhs = [draw(st.integers(0, 6)) for _ in range(m)]
    # sum row keeps x bounded; each row gets its own slack
    rows.append([1] * n)
    rhs.append(draw(st.integers(0, 5)))
    k = len(rows)
    A = np.zeros((k, n + k), dtype=np.int64)
    A[:, :n] = rows
    A[:, n:] = np.eye(k, dtype=np.int64)
    b = np.array(rhs, dtype=np.int64)
    c = np.array([draw(st.integers(-4, 4)) for _ in range(n)] + [0] * k, dtype=np.int64)
    return A, b, c


@given(bounded_lps())
def test_matches_vertex_enumeration(lp):
    A, b, c = lp
    res = ExactLP(A, b).maximize(c)
    assert res.value == brute_force_max(A, b, c)
    assert check_certificate(A, b, c, res)


def test_redundant_rows():
    A = np.array([[1, 1, 0], [2, 2, 0], [0, 1, 1]])
    b = np.array([1, 2, 1])
    c = np.array([1, 2, 0])
    lp = ExactLP(A, b)
    assert lp.rank == 2
    res = lp.maximize(c)
    assert res.value == 2
    assert check_certificate(A, b, c, res)


def test_infeasible():
    with pytest.raises(Infeasible):
        ExactLP(np.array([[1, 1], [1, 1]]), np.array([1, 2]))


def test_unbounded():
    lp = ExactLP(np.array([[1, -1]]), np.array([0]))
    with pytest.raises(Unbounded):
        lp.maximize(np.array([1, 0]))


def test_negative_rhs_rejected():
    with pytest.raises(ValueError):
        ExactLP(np.array([[1]]), np.array([-1]))


def test_beale_cycling_example():
    # cycles under the largest-coefficient rule; Bland's rule must terminate
    A = np.array([
        [100, 0, 0, 25, -6000, -4, 900],
        [0, 100, 0, 50, -9000, -2, 300],
        [0, 0, 1, 0, 0, 1, 0],
    ])
    b = np.array([0, 0, 1])
    c = np.array([0, 0, 0, 75, -15000, 2, -600])  # objective scaled by 100
    res = ExactLP(A, b).maximize(c)
    assert res.value == 5
    assert check_certificate(A, b, c, res)


def test_large_entries_switch_to_python_ints():
    big = 3**25
    A = np.array([[big, 1, 0], [1, 0, 1]], dtype=np.int64)
    b = np.array([big, 1], dtype=np.int64)
    c = np.array([1, 0, 0])
    res = ExactLP(A, b).maximize(c)
    assert res.value == 1
    assert check_certificate(A, b, c, res)


def test_certificate_rejects_wrong_answers():
    A = np.array([[1, 1, 1]])
    b = np.array([1])
    c = np.array([1, 2, 0])
    good = ExactLP(A, b).maximize(c)
    assert good.value == 2 and check_certificate(A, b, c, good)
    worse = simplex.LPResult(Fraction(1), (Fraction(1), Fraction(0), Fraction(0)),
                             (Fraction(1),), good.basis, 0)
    assert not check_certificate(A, b, c, worse)
    infeasible = simplex.LPResult(Fraction(2), (Fraction(0), Fraction(1), Fraction(1)),
                                  good.dual, good.basis, 0)
    assert not check_certificate(A, b, c, infeasible)


def test_corrupted_ratio_test_is_caught(monkeypatch):
    """Mutation check: a broken leaving rule must not survive certification."""
    A = np.array([[1, 1, 1, 0], [1, 3, 0, 1]])
    b = np.array([4, 6])
    c = np.array([1, 2, 0, 0])

    def last_positive_row(self, col):
        rows = np.flatnonzero(self.T[:-1, col] > 0)
        return None if rows.size == 0 else int(rows[-1])

    monkeypatch.setattr(simplex._Tableau, "leaving", last_positive_row)
    res = ExactLP(A, b).maximize(c)
    assert not check_certificate(A, b, c, res)


def test_truncated_run_fails_certificate():
    A = np.array([[1, 1, 1, 0], [1, 3, 0, 1]])
    b = np.array([4, 6])
    c = np.array([1, 0, 0, 0])
    lp = ExactLP(A, b)
    full = lp.maximize(c)
    assert check_certificate(A, b, c, full)
    lp.max_pivots = 0
    assert not check_certificate(A, b, c, lp.maximize(c))
