# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cyclic Jacobi eigensolver for small Hermitian matrices
and the exact 5^L amplitude builder for periodic finite chains.

The Jacobi routine zeroes one off-diagonal pair per rotation, sweeping
row-cyclically until the off-diagonal Frobenius norm falls below machine
threshold; convergence is quadratic and a handful of sweeps suffices for
the 9x9 transfer matrices this package produces.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def eigh(H):
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.

    Returns (w, V) with w ascending and eigenvectors as columns of V,
    matching the numpy.linalg.eigh convention.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Hc = np.array(H, dtype=np.complex128, order='C')
    cdef Py_ssize_t n = Hc.shape[0]
    if Hc.shape[1] != n:
        raise ValueError("matrix must be square")
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = np.eye(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    cdef double complex[:, :] a = Hc
    cdef double complex[:, :] v = V
    cdef Py_ssize_t p, q, k, sweep, imin
    cdef double normf, off, apq_abs, tau, t, c, s, app, aqq, wmin
    cdef double complex apq, phase, hkp, hkq, vkp, vkq

    normf = 0.0
    for p in range(n):
        for q in range(n):
            normf += (a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag)
    normf = sqrt(normf)
    if normf == 0.0:
        return w * 0.0, V

    for sweep in range(60):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += (a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag)
        if sqrt(off) <= 1e-15 * normf:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                apq_abs = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if apq_abs <= 1e-18 * normf:
                    continue
                phase = apq / apq_abs
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * apq_abs)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # rotate rows/columns p and q of a
                for k in range(n):
                    hkp = a[k, p]
                    hkq = a[k, q]
                    a[k, p] = c * hkp - s * phase.conjugate() * hkq
                    a[k, q] = s * phase * hkp + c * hkq
                for k in range(n):
                    hkp = a[p, k]
                    hkq = a[q, k]
                    a[p, k] = c * hkp - s * phase * hkq
                    a[q, k] = s * phase.conjugate() * hkp + c * hkq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * apq_abs
                a[q, q] = aqq + t * apq_abs
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * phase.conjugate() * vkq
                    v[k, q] = s * phase * vkp + c * vkq

    for p in range(n):
        w[p] = a[p, p].real
    # selection sort ascending, swapping eigenvector columns along
    for p in range(n - 1):
        imin = p
        wmin = w[p]
        for q in range(p + 1, n):
            if w[q] < wmin:
                imin = q
                wmin = w[q]
        if imin != p:
            w[imin] = w[p]
            w[p] = wmin
            for k in range(n):
                hkp = v[k, p]
                v[k, p] = v[k, imin]
                v[k, imin] = hkp
    return np.asarray(w), V


def finite_amplitudes(A, Py_ssize_t L):
    """Amplitudes tr(A[s1]...A[sL]) for all 5^L configurations.

    Odometer walk over configurations with a stack of partial products, so
    each step recomputes only the suffix whose digits changed (amortized
    1.25 matrix products per amplitude).
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] Ac = np.array(A, dtype=np.complex128, order='C')
    if Ac.shape[0] != 5 or Ac.shape[1] != 3 or Ac.shape[2] != 3:
        raise ValueError("tensor must have shape (5, 3, 3)")
    if L < 1 or L > 12:
        raise ValueError("L out of supported range")
    cdef Py_ssize_t total = 1, q
    for q in range(L):
        total *= 5
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(total, dtype=np.complex128)
    cdef double complex[:, :, :] t = Ac
    cdef double complex P[13][3][3]
    cdef int d[13]
    cdef Py_ssize_t idx, lev, i, j, k, m
    cdef double complex acc

    for i in range(3):
        for j in range(3):
            P[0][i][j] = 1.0 if i == j else 0.0

    for lev in range(L):
        d[lev] = 0
    lev = 0
    # fill stack for the all-zeros configuration
    for lev in range(L):
        for i in range(3):
            for j in range(3):
                acc = 0.0
                for k in range(3):
                    acc = acc + P[lev][i][k] * t[d[lev], k, j]
                P[lev + 1][i][j] = acc

    for idx in range(total):
        out[idx] = P[L][0][0] + P[L][1][1] + P[L][2][2]
        # advance odometer: increment the last digit below 4, zero the rest
        m = L - 1
        while m >= 0 and d[m] == 4:
            d[m] = 0
            m -= 1
        if m < 0:
            break
        d[m] += 1
        for lev in range(m, L):
            for i in range(3):
                for j in range(3):
                    acc = 0.0
                    for k in range(3):
                        acc = acc + P[lev][i][k] * t[d[lev], k, j]
                    P[lev + 1][i][j] = acc
    return out
