"""Transfer matrices of the spin-2 matrix-product family and every
thermodynamic-limit observable extracted from them.

The plain transfer matrix F contracts the site tensor with its conjugate
over the physical index; with bond dimension 3 it is 9x9, real symmetric
for every real parameter triple, and block diagonal in the bond-charge
difference dm = mu - mu' (dm is conserved because A[s] shifts the bond
index by s on both layers). Its dominant eigenpair (lambda_1, e1) gives
the one-site density matrix, correlators follow from operator-inserted
transfer matrices, and correlation lengths from subleading eigenvalues.
"""
from functools import lru_cache

import numpy as np

from .errors import CorrelatorVanishes, InvariantViolation, NoPlateau
from .mpstate import build_g
from .numerics import dominant_eigenpair, eig_hermitian

# spin-2 operators in the ascending basis (|-2>,|-1>,|0>,|1>,|2>)
SZ = np.diag([-2.0, -1.0, 0.0, 1.0, 2.0])
SP = np.zeros((5, 5))
for _i, _m in enumerate((-2, -1, 0, 1)):
    SP[_i + 1, _i] = np.sqrt(6.0 - _m * (_m + 1))
SM = SP.T.copy()
SX = (SP + SM) / 2
SY = (SP - SM) / 2j
IDENTITY5 = np.eye(5)


def phase_op(theta):
    """String-phase operator exp(i*theta*Sz)."""
    return np.diag(np.exp(1j * theta * np.diag(SZ)))


def build_transfer(G):
    """Plain transfer matrix, row index 3*(mu-1)+(mu'-1)."""
    A = G.tensor
    F = np.einsum('smn,spq->mpnq', A, A.conj()).reshape(9, 9)
    if np.abs(F.imag).max() > 1e-12:
        raise InvariantViolation("plain transfer matrix came out complex")
    return F.real


def build_operator_transfer(G, O):
    """Transfer matrix with a one-site operator inserted between the layers."""
    A = G.tensor
    return np.einsum('ts,smn,tpq->mpnq', np.asarray(O, dtype=complex),
                     A, A.conj()).reshape(9, 9)


def build_mixed_transfer(G, G2):
    """Overlap transfer matrix between two parameter points of the family."""
    M = np.einsum('smn,spq->mpnq', G.tensor, G2.tensor.conj()).reshape(9, 9)
    if np.abs(M.imag).max() < 1e-12:
        M = M.real
    return M


@lru_cache(maxsize=4096)
def _spectral(params):
    # read-shared cache of (F, spectrum, dominant pair) per parameter triple
    F = build_transfer(build_g(params))
    w, V = eig_hermitian(F)
    pair = dominant_eigenpair(F)
    F.setflags(write=False)
    w.setflags(write=False)
    V.setflags(write=False)
    return F, w, V, pair


def clear_caches():
    _spectral.cache_clear()


def transfer_spectrum(G):
    """Full (eigenvalues, eigenvectors) of the plain transfer matrix."""
    _, w, V, _ = _spectral(G.params)
    return w, V


def dominant_data(G):
    """(lambda_1, e1, gap_ratio) of the plain transfer matrix."""
    _, _, _, pair = _spectral(G.params)
    return pair


def tdl_one_site_rdm(G):
    """One-site density matrix in the thermodynamic limit.

    rho[s,t] = <e1| A[s] (x) conj(A[t]) |e1> / lambda_1; diagonal in the Sz
    basis for this family because e1 lives in the dm=0 sector.
    """
    pair = dominant_data(G)
    E = pair.vector.reshape(3, 3)
    A = G.tensor
    rho = np.einsum('mp,smn,tpq,nq->st', E.conj(), A, A.conj(), E) / pair.value
    rho = (rho + rho.conj().T) / 2
    tr = rho.trace().real
    if abs(tr - 1.0) > 1e-10:
        raise InvariantViolation("one-site rdm trace %.15g != 1" % tr)
    if np.abs(rho.imag).max() < 1e-13:
        rho = rho.real
    return rho


def closed_form_rdm_acritical(a):
    """Closed-form rdm diagonal on the x=-3, gamma=-2 slice.

    Weights 2*(a^2, t, 2+t^2/9, t, a^2)/K with t = 3-a^2+sqrt(D),
    D = 81-6a^2+a^4, K = (5+a^2+sqrt(D))*(2+t^2/36); the trace is 1
    identically in a.
    """
    a2 = a * a
    D = 81.0 - 6.0 * a2 + a2 * a2
    t = 3.0 - a2 + np.sqrt(D)
    K = (5.0 + a2 + np.sqrt(D)) * (2.0 + t * t / 36.0)
    return np.diag([2 * a2 / K, 2 * t / K, 2 * (2 + t * t / 9.0) / K,
                    2 * t / K, 2 * a2 / K])


def closed_form_rdm_critical(a):
    """Closed-form rdm diagonal on the x=0, gamma=1 slice (a=0 as limit)."""
    a2 = a * a
    p = a2 / (2.0 * (1.0 + a2))
    return np.diag([p, 0.0, 1.0 / (1.0 + a2), 0.0, p])


def two_point(G, O1, O2, r):
    """Distance-r correlator <O1(i) O2(i+r)> in the thermodynamic limit.

    r=0 is the single-site expectation of the product O1@O2 (one code path
    for the fluctuation measure). Means of the individual operators vanish
    for this family, so this is also the connected correlator.
    """
    r = int(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    pair = dominant_data(G)
    lam, e1 = pair.value, pair.vector
    if r == 0:
        FO = build_operator_transfer(G, np.asarray(O1) @ np.asarray(O2))
        return complex(np.vdot(e1, FO @ e1) / lam)
    F, _, _, _ = _spectral(G.params)
    w = build_operator_transfer(G, O2) @ e1 / lam
    for _ in range(r - 1):
        w = F @ w / lam
    return complex(np.vdot(e1, build_operator_transfer(G, O1) @ w) / lam)


def tm_finite_correlator(G, O1, O2, r, L):
    """Exact finite-ring correlator trace(F_O1 F^{r-1} F_O2 F^{L-r-1})/trace(F^L)."""
    r, L = int(r), int(L)
    if not 1 <= r < L:
        raise ValueError("need 1 <= r < L, got r=%d L=%d" % (r, L))
    F = build_transfer(G).astype(complex)
    F1 = build_operator_transfer(G, O1)
    F2 = build_operator_transfer(G, O2)
    num = np.trace(F1 @ np.linalg.matrix_power(F, r - 1) @ F2
                   @ np.linalg.matrix_power(F, L - r - 1))
    den = np.trace(np.linalg.matrix_power(F, L))
    return complex(num / den)


def _correlator_sequence(G, O, r_max):
    # two_point(G, O, O, r) for r = 1..r_max sharing the propagated vector
    pair = dominant_data(G)
    lam, e1 = pair.value, pair.vector
    F, _, _, _ = _spectral(G.params)
    FO = build_operator_transfer(G, O)
    left = FO.conj().T @ e1
    w = FO @ e1 / lam
    out = []
    for _ in range(r_max):
        out.append(complex(np.vdot(left, w) / lam))
        w = F @ w / lam
    return np.array(out)


def correlation_length_fit(G, O, r_min=5, r_max=40, full=False):
    """Correlation length from a log-linear fit of |<O(0)O(r)>|.

    Fits ln|C(r)| over the admissible window (|C| > 1e-13, at least 8
    points required) and returns xi = -1/slope.
    """
    C = _correlator_sequence(G, O, r_max)[r_min - 1:]
    rs = np.arange(r_min, r_max + 1)
    keep = np.abs(C) > 1e-13
    if keep.sum() < 8:
        raise CorrelatorVanishes(
            "only %d correlator values above floor in r=%d..%d"
            % (int(keep.sum()), r_min, r_max))
    y = np.log(np.abs(C[keep]))
    slope, intercept = np.polyfit(rs[keep], y, 1)
    if slope >= 0:
        raise CorrelatorVanishes("correlator does not decay (slope %.3e)" % slope)
    residual = float(np.abs(y - (slope * rs[keep] + intercept)).max())
    xi = float(-1.0 / slope)
    if full:
        return xi, {"slope": float(slope), "residual": residual,
                    "n_points": int(keep.sum())}
    return xi


def _xi_from_candidates(lam1, values, coeffs, coeff_tol=1e-10):
    # shared tail of the spectral estimators: pick the largest-magnitude
    # eigenvalue carrying weight, map the ratio to a length
    mask = np.abs(coeffs) > coeff_tol
    if not mask.any():
        raise CorrelatorVanishes("no eigenvalue carries coefficient above %g"
                                 % coeff_tol)
    lam_star = values[mask][np.argmax(np.abs(values[mask]))]
    mag = abs(lam_star)
    if mag >= lam1 * (1.0 - 1e-12):
        return float('inf')
    if mag < 1e-15 * lam1:
        return 0.0
    return float(1.0 / np.log(lam1 / mag))


def correlation_length_spectral(G, O):
    """Correlation length of <O(0)O(r)> from the transfer-matrix spectrum.

    Expands F_O|e1> in the eigenbasis of F, drops the dominant direction,
    and converts the largest remaining eigenvalue magnitude with nonzero
    coefficient into xi = 1/ln(lambda_1/|lambda*|).
    """
    _, w, V, pair = _spectral(G.params)
    vec = build_operator_transfer(G, O) @ pair.vector / pair.value
    coeffs = V.conj().T @ vec
    drop = int(np.argmax(np.abs(w)))
    keep = np.ones(len(w), dtype=bool)
    keep[drop] = False
    return _xi_from_candidates(pair.value, w[keep], coeffs[keep])


# composite indices of the dm = mu - mu' blocks of the 9x9 transfer matrix
_SECTOR_INDEX = {0: (0, 4, 8), 1: (3, 7), -1: (1, 5), 2: (6,), -2: (2,)}


def correlation_length_sector(G, dm=1):
    """Correlation length from the dm bond-charge sector of F itself.

    Operator-free variant: xi = 1/ln(lambda_1/|lambda_max^(dm)|). For dm=0
    the dominant eigenvalue itself is excluded.
    """
    F, _, _, pair = _spectral(G.params)
    idx = np.asarray(_SECTOR_INDEX[int(dm)])
    sub = F[np.ix_(idx, idx)]
    vals, _ = eig_hermitian(sub)
    mags = np.sort(np.abs(vals))[::-1]
    mag = mags[1] if dm == 0 else mags[0]
    if mag >= pair.value * (1.0 - 1e-12):
        return float('inf')
    if mag < 1e-15 * pair.value:
        return 0.0
    return float(1.0 / np.log(pair.value / mag))


def correlation_lengths(G):
    """(xi_long, xi_trans) from Sz and Sx correlators.

    Falls back to the dm=1 sector ratio when the transverse correlator
    vanishes identically (x=0, where F_Sx = 0); that ratio is the x->0+
    limit of the correlator definition.
    """
    xi_long = correlation_length_spectral(G, SZ)
    try:
        xi_trans = correlation_length_spectral(G, SX)
    except CorrelatorVanishes:
        xi_trans = correlation_length_sector(G, dm=1)
    return xi_long, xi_trans


def string_order(G, theta, r, check_plateau=True):
    """Nonlocal correlator <Sz_0 prod_{k=1}^{r-1} e^(i theta Sz_k) Sz_r>.

    With check_plateau the value is also computed at 2r and the two must
    agree to 1e-6 relative (NoPlateau otherwise); geometric convergence
    makes the doubled evaluation a cheap plateau certificate.
    """
    r = int(r)
    if r < 2:
        raise ValueError("string order needs r >= 2, got %d" % r)

    pair = dominant_data(G)
    lam, e1 = pair.value, pair.vector
    FZ = build_operator_transfer(G, SZ)
    FP = build_operator_transfer(G, phase_op(theta)) / lam
    left = FZ.conj().T @ e1

    def value_at(n):
        w = FZ @ e1 / lam
        for _ in range(n - 1):
            w = FP @ w
        return complex(np.vdot(left, w) / lam)

    v = value_at(r)
    if check_plateau:
        v2 = value_at(2 * r)
        drift = abs(v - v2) / max(abs(v2), 1e-12)
        if drift > 1e-6:
            raise NoPlateau(
                "string correlator still drifting: |v(r)-v(2r)|/|v(2r)| = %.3e "
                "at r=%d" % (drift, r))
    return v
