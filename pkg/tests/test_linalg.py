import numpy as np
import pytest

from idgames.linalg import jacobi_eigh, positive_projector


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 9])
def test_jacobi_matches_numpy(n, rng):
    for _ in range(5):
        X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = X + X.conj().T
        w, V = jacobi_eigh(H)
        assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-10)
        assert np.allclose(V.conj().T @ V, np.eye(n), atol=1e-10)
        assert np.allclose(H @ V, V * w, atol=1e-9)


def test_degenerate_and_diagonal():
    H = np.diag([3.0, 1.0, 1.0, -2.0]).astype(complex)
    w, V = jacobi_eigh(H)
    assert np.allclose(w, [-2, 1, 1, 3])
    w, _ = jacobi_eigh(np.eye(4))
    assert np.allclose(w, 1)


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0, 1], [0, 0]], dtype=complex))


def test_positive_projector(rng):
    X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H = X + X.conj().T
    for eigh in (np.linalg.eigh, jacobi_eigh):
        P = positive_projector(H, eigh)
        assert np.allclose(P @ P, P, atol=1e-10)
        assert np.allclose(P, P.conj().T)
        # the projector maximises tr(P H) over effects
        w = np.linalg.eigvalsh(H)
        assert np.isclose(np.trace(P @ H).real, w[w > 0].sum())
