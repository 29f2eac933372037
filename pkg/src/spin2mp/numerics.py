"""Dense Hermitian eigenproblems for the small matrices of this package.

Everything here operates on 5x5 density matrices and 9x9 transfer matrices;
the eigensolver kernel is selected in `backend` (compiled Jacobi or numpy).
"""
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DegenerateDominant, NonPositiveDominant, NotHermitian, NotPSD


@dataclass(frozen=True)
class EigenPair:
    """Dominant eigenvalue/eigenvector with the magnitude gap to the rest."""
    value: float
    vector: np.ndarray
    gap_ratio: float


def _check_hermitian(M, tol, who):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitian("%s: matrix must be square, got %r" % (who, M.shape))
    dev = np.abs(M - M.conj().T).max()
    if dev > tol:
        raise NotHermitian("%s: |M - M^dag| = %.3e exceeds %.1e" % (who, dev, tol))
    return M


def eig_hermitian(M, tol=1e-10):
    """Full spectrum of a Hermitian matrix.

    Returns (w, V) with eigenvalues ascending and eigenvectors as the columns
    of V, orthonormal to working precision.
    """
    M = _check_hermitian(M, tol, "eig_hermitian")
    return backend.eigh((M + M.conj().T) / 2)


def _fix_vector_sign(v):
    # deterministic overall phase: largest-|component| entry made real positive
    k = int(np.argmax(np.abs(v)))
    piv = v[k]
    if np.abs(piv) > 0:
        v = v * (np.conj(piv) / np.abs(piv))
    if np.abs(v.imag).max() < 1e-13 * max(1.0, np.abs(v.real).max()):
        v = v.real.astype(float)
    return v / np.linalg.norm(v)


def dominant_eigenpair(M, tol=1e-13, max_sweeps=100):
    """Largest-magnitude eigenpair of a real symmetric matrix.

    The candidate from the full spectrum is polished by power iteration on
    the shifted matrix M + lambda*I. Raises DegenerateDominant when the two
    largest magnitudes agree within tol relative, NonPositiveDominant when
    the dominant eigenvalue fails the Perron sign check.
    """
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.abs(M.imag).max() > 1e-12:
            raise NotHermitian("dominant_eigenpair: matrix must be real")
        M = M.real
    Msym = _check_hermitian(M, 1e-10, "dominant_eigenpair").real
    w, V = backend.eigh(Msym)
    mags = np.abs(w)
    order = np.argsort(mags)
    i1, i2 = order[-1], order[-2]
    lam = w[i1]
    if mags[i1] == 0.0 or (mags[i1] - mags[i2]) < tol * mags[i1]:
        raise DegenerateDominant(
            "dominant magnitudes %.15g and %.15g are degenerate" % (w[i1], w[i2]))
    if lam <= 0.0:
        raise NonPositiveDominant("dominant eigenvalue %.15g is not positive" % lam)
    gap_ratio = float(mags[i2] / mags[i1])

    v = _fix_vector_sign(V[:, i1])
    shifted = Msym + lam * np.eye(Msym.shape[0])
    for _ in range(max_sweeps):
        v = shifted @ v
        v = v / np.linalg.norm(v)
        lam_new = float(v @ (Msym @ v))
        if np.abs(Msym @ v - lam_new * v).max() <= 1e-14 * abs(lam_new):
            lam = lam_new
            break
        lam = lam_new
    v = _fix_vector_sign(v)
    return EigenPair(value=float(lam), vector=v, gap_ratio=gap_ratio)


def sqrt_psd(rho, clip_tol=1e-12):
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-clip_tol, 0) are clipped to zero; anything lower raises
    NotPSD.
    """
    rho = _check_hermitian(rho, 1e-10, "sqrt_psd")
    w, V = backend.eigh((rho + rho.conj().T) / 2)
    if w.min() < -clip_tol:
        raise NotPSD("eigenvalue %.3e below -%.1e" % (w.min(), clip_tol))
    w = np.clip(w, 0.0, None)
    R = (V * np.sqrt(w)) @ V.conj().T
    return (R + R.conj().T) / 2
