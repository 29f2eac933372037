"""Pure-numpy kernel implementations (fallback for the compiled core).

Same call contracts as the Cython module `_core`: `eigh` returns ascending
eigenvalues with eigenvector columns; `finite_amplitudes` returns the 5^L
trace amplitudes of the periodic chain, first site most significant digit.
"""
import numpy as np


def eigh(H):
    """Eigendecomposition of a Hermitian matrix (LAPACK via numpy)."""
    w, V = np.linalg.eigh(np.asarray(H, dtype=complex))
    return w, V


def _amplitude_block(A, prefix, L):
    M = prefix
    for _ in range(L):
        M = np.matmul(M[:, None, :, :], A[None, :, :, :]).reshape(-1, 3, 3)
    return M[:, 0, 0] + M[:, 1, 1] + M[:, 2, 2]


def finite_amplitudes(A, L):
    """Amplitudes tr(A[s1]...A[sL]) for all 5^L configurations.

    Builds the batched partial products level by level; beyond L=8 the
    work is split over first-two-digit blocks to cap the 9 * 5^L complex
    working set.
    """
    A = np.asarray(A, dtype=complex)
    if L <= 8:
        return _amplitude_block(A, A.copy(), L - 1)
    heads = np.matmul(A[:, None, :, :], A[None, :, :, :]).reshape(-1, 3, 3)
    return np.concatenate([_amplitude_block(A, heads[k:k + 1], L - 2)
                           for k in range(25)])
