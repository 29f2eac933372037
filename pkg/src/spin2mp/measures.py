"""Scalar observables built on the transfer-matrix layer: entropy and its
parameter derivatives, reduced fidelity and its susceptibility, per-site
fidelity, magnetization fluctuations, and a bracketed extremum search."""
import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, NotUnimodal, StencilFailure
from .mpstate import ModelParams, build_g
from .numerics import dominant_eigenpair, eig_hermitian, sqrt_psd
from .transfer import (IDENTITY5, SX, SY, SZ, build_mixed_transfer,
                       dominant_data, tdl_one_site_rdm, two_point)


def vn_entropy(rho, clip_tol=1e-12):
    """Von Neumann entropy in bits, -sum p log2 p over the spectrum."""
    w, _ = eig_hermitian(np.asarray(rho, dtype=complex))
    if w.min() < -clip_tol:
        raise InvariantViolation("density matrix eigenvalue %.3e < 0" % w.min())
    p = np.clip(w, 0.0, None)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def entropy_at(params):
    """One-site entropy of the thermodynamic-limit state at a parameter point."""
    return vn_entropy(tdl_one_site_rdm(build_g(params)))


@dataclass(frozen=True)
class DerivativeEstimate:
    value: float
    error: float


def numerical_derivative(f, a0, order=1, h=1e-4, richardson_levels=2):
    """Richardson-extrapolated central difference of f at a0.

    Builds the central stencil at h, h/2, ..., h/2^levels and extrapolates
    the O(h^2) error away; the error field is the difference between the
    last two extrapolation orders, a usable accuracy indicator.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")

    def stencil(step):
        if order == 1:
            vals = (f(a0 + step), f(a0 - step))
            d = (vals[0] - vals[1]) / (2 * step)
        else:
            vals = (f(a0 + step), f(a0), f(a0 - step))
            d = (vals[0] - 2 * vals[1] + vals[2]) / step ** 2
        if not all(np.isfinite(v) for v in vals):
            raise StencilFailure("non-finite function value near %.6g" % a0)
        return d

    n = richardson_levels + 1
    T = np.zeros((n, n))
    for i in range(n):
        T[i, 0] = stencil(h / 2 ** i)
        for j in range(1, i + 1):
            T[i, j] = (4 ** j * T[i, j - 1] - T[i - 1, j - 1]) / (4 ** j - 1)
    if not np.isfinite(T[n - 1, n - 1]):
        raise StencilFailure("extrapolation table diverged at %.6g" % a0)
    err = abs(T[n - 1, n - 1] - T[n - 1, n - 2]) if n > 1 else np.inf
    return DerivativeEstimate(float(T[n - 1, n - 1]), float(err))


def uhlmann_fidelity(rho, sigma):
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), symmetric in
    its arguments and 1 exactly when they coincide."""
    s = sqrt_psd(np.asarray(rho, dtype=complex))
    M = s @ np.asarray(sigma, dtype=complex) @ s
    w, _ = eig_hermitian((M + M.conj().T) / 2)
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())


def reduced_fidelity(params, delta=1e-3):
    """Uhlmann fidelity between the one-site rdms at a and a + delta."""
    shifted = dataclasses.replace(params, a=params.a + delta)
    return uhlmann_fidelity(tdl_one_site_rdm(build_g(params)),
                            tdl_one_site_rdm(build_g(shifted)))


@dataclass(frozen=True)
class RfsEstimate:
    fixed_delta: float
    second_derivative: float
    delta_drift: float
    converged: bool


def rfs(params, delta=1e-3, h=1e-4):
    """Reduced fidelity susceptibility, by two routes.

    fixed_delta is 2*(1 - F_R(a, a+delta))/delta^2; halving delta must move
    it by less than 1e-3 relative for the estimate to count as converged
    (delta_drift records the actual relative change). second_derivative is
    -d^2/da'^2 F(rho(a), rho(a')) at a' = a from the Richardson stencil.
    """
    chi = 2.0 * (1.0 - reduced_fidelity(params, delta)) / delta ** 2
    chi_half = 2.0 * (1.0 - reduced_fidelity(params, delta / 2)) / (delta / 2) ** 2
    drift = abs(chi - chi_half) / max(abs(chi_half), 1e-300)

    rho0 = tdl_one_site_rdm(build_g(params))

    def f(ap):
        return uhlmann_fidelity(rho0, tdl_one_site_rdm(
            build_g(dataclasses.replace(params, a=ap))))

    d2 = numerical_derivative(f, params.a, order=2, h=h)
    return RfsEstimate(float(chi), float(-d2.value), float(drift),
                       bool(drift < 1e-3))


def fidelity_per_site(params, params2):
    """Thermodynamic per-site overlap lambda_1(mixed)/sqrt(lambda_1 lambda_1')."""
    g1, g2 = build_g(params), build_g(params2)
    mixed = build_mixed_transfer(g1, g2)
    lam_mixed = dominant_eigenpair(mixed).value
    return float(lam_mixed / np.sqrt(dominant_data(g1).value
                                     * dominant_data(g2).value))


def magnetization_and_fluctuation(G):
    """(m_x, m_y, m_z, <Sz^2> - m_z^2).

    All three magnetization components must vanish for this family and the
    fluctuation is bounded by the extreme Sz eigenvalue; both are enforced.
    """
    means = [two_point(G, O, IDENTITY5, 0) for O in (SX, SY, SZ)]
    worst = max(abs(m) for m in means)
    if worst > 1e-12:
        raise InvariantViolation("nonzero magnetization %.3e" % worst)
    mx, my, mz = (m.real for m in means)
    sz2 = two_point(G, SZ, SZ, 0).real
    fluct = float(sz2 - mz * mz)
    if not -1e-12 <= fluct <= 4.0 + 1e-12:
        raise InvariantViolation("fluctuation %.6g outside [0, 4]" % fluct)
    return mx, my, mz, fluct


_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def locate_extremum(f, bracket, kind="max", xtol=1e-6, scan_points=17):
    """Golden-section extremum of f on a bracket, after a unimodality scan.

    A uniform scan must see exactly one interior local optimum of the
    requested kind; zero (boundary optimum) or several raise NotUnimodal.
    """
    if kind not in ("max", "min"):
        raise ValueError("kind must be 'max' or 'min'")
    lo, hi = float(bracket[0]), float(bracket[1])
    xs = np.linspace(lo, hi, scan_points)
    ys = np.array([f(x) for x in xs])
    if kind == "min":
        ys = -ys
    interior = [i for i in range(1, scan_points - 1)
                if ys[i] >= ys[i - 1] and ys[i] >= ys[i + 1]]
    if len(interior) != 1:
        raise NotUnimodal("%d interior local optima in scan of [%g, %g]"
                          % (len(interior), lo, hi))
    i = interior[0]
    a, b = xs[i - 1], xs[i + 1]

    sign = 1.0 if kind == "max" else -1.0
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = sign * f(d)
    return float((a + b) / 2)


@dataclass
class MeasurePoint:
    """One evaluated parameter point; fields left as None were not requested."""
    a: float
    lambda1: float = None
    S: float = None
    dS_da: float = None
    d2S_da2: float = None
    F_R: float = None
    RFS_fixed_delta: float = None
    RFS_second_derivative: float = None
    fidelity_per_site: float = None
    xi_long: float = None
    xi_trans: float = None
    string_order: float = None
    fluct_zz: float = None
    limit_flag: bool = False


def correlation_length_crossing(x, gamma, bracket, xtol=1e-6):
    """Parameter where the longitudinal and transverse lengths cross,
    found by bisecting the difference of inverse lengths."""
    from .transfer import correlation_lengths

    def inv(xi):
        # xi = 0 marks super-exponential decay: infinite inverse length
        if np.isinf(xi):
            return 0.0
        if xi == 0.0:
            return float("inf")
        return 1.0 / xi

    def gap(a):
        xi_l, xi_t = correlation_lengths(build_g(ModelParams(a, x, gamma)))
        return inv(xi_l) - inv(xi_t)

    lo, hi = float(bracket[0]), float(bracket[1])
    glo, ghi = gap(lo), gap(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if np.sign(glo) == np.sign(ghi):
        raise NotUnimodal("no sign change of the inverse-length gap on "
                          "[%g, %g]" % (lo, hi))
    while hi - lo > xtol:
        mid = (lo + hi) / 2
        gm = gap(mid)
        if gm == 0.0:
            return mid
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    return (lo + hi) / 2
