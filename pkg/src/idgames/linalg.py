"""Cyclic Jacobi eigensolver for small dense Hermitian matrices."""

from __future__ import annotations

import numpy as np

__all__ = ["jacobi_eigh", "positive_projector"]


def jacobi_eigh(H: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Eigenvalues (ascending) and eigenvectors (columns) of Hermitian ``H``.

    Each complex rotation zeroes one off-diagonal pair; sweeps continue until
    the off-diagonal Frobenius norm drops below ``tol`` times the norm of ``H``.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.conj().T, atol=1e-10):
        raise ValueError("matrix is not Hermitian")
    A = (A + A.conj().T) / 2
    V = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(A), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # remove the phase so the 2x2 block becomes real symmetric
                phase = apq / mag
                app, aqq = A[p, p].real, A[q, q].real
                theta = 0.5 * np.arctan2(2 * mag, aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                G = np.eye(n, dtype=complex)
                G[p, p] = c
                G[q, q] = c
                G[p, q] = s * phase
                G[q, p] = -s * np.conj(phase)
                A = G.conj().T @ A @ G
                V = V @ G
    w = np.real(np.diag(A))
    order = np.argsort(w)
    return w[order], V[:, order]


def positive_projector(M: np.ndarray, eigh=np.linalg.eigh) -> np.ndarray:
    """Projector onto the span of eigenvectors of ``M`` with positive eigenvalue."""
    w, V = eigh(M)
    keep = V[:, w > 0]
    return keep @ keep.conj().T
