import math

import numpy as np
import pytest

from spin2mp.errors import InvariantViolation, NotUnimodal, StencilFailure
from spin2mp.measures import (correlation_length_crossing, entropy_at,
                              fidelity_per_site, locate_extremum,
                              magnetization_and_fluctuation,
                              numerical_derivative, reduced_fidelity,
                              rfs, uhlmann_fidelity, vn_entropy)
from spin2mp.mpstate import ModelParams, build_g

SQ2 = math.sqrt(2.0)
SQ6 = math.sqrt(6.0)
LOG2_5 = math.log2(5.0)


def fr_critical(a, a2):
    return (1 + a * a2) / math.sqrt((1 + a * a) * (1 + a2 * a2))


def test_entropy_examples():
    assert vn_entropy(np.eye(5) / 5) == pytest.approx(LOG2_5, abs=1e-12)
    assert vn_entropy(np.diag([0, 0, 1.0, 0, 0])) == pytest.approx(0.0,
                                                                   abs=1e-12)
    rho = np.diag([0, 2 / 7, 3 / 7, 2 / 7, 0])
    assert vn_entropy(rho) == pytest.approx(1.556657, abs=1e-6)


def test_entropy_rejects_negative_weight():
    with pytest.raises(InvariantViolation):
        vn_entropy(np.diag([1.1, 0, 0, 0, -0.1]))


def test_entropy_landmarks():
    assert entropy_at(ModelParams(SQ6, -3.0, -2.0)) == pytest.approx(
        LOG2_5, abs=1e-9)
    assert entropy_at(ModelParams.critical(SQ2)) == pytest.approx(
        math.log2(3.0), abs=1e-9)


def test_entropy_parity():
    for make in (ModelParams.acritical, ModelParams.critical):
        for a in (0.3, 1.0, 2.2):
            assert entropy_at(make(a)) == pytest.approx(entropy_at(make(-a)),
                                                        abs=1e-12)


def test_derivative_quadratic():
    # truncation error vanishes for a quadratic; h=1e-2 keeps roundoff low
    # (Richardson shrinks the stencil to h/4 internally)
    for a0 in (0.3, 0.7, 2.0):
        est = numerical_derivative(lambda a: a * a, a0, order=2, h=1e-2)
        assert est.value == pytest.approx(2.0, abs=1e-8)
        assert est.error <= 1e-8
    est = numerical_derivative(lambda a: a * a * a, 2.0, order=1)
    assert est.value == pytest.approx(12.0, abs=1e-7)


def test_derivative_entropy_stationary_at_vbs():
    est = numerical_derivative(
        lambda a: entropy_at(ModelParams.acritical(a)), SQ6, order=1)
    assert abs(est.value) <= 1e-6


def test_derivative_divergence_toward_degenerate_point():
    for make in (ModelParams.acritical, ModelParams.critical):
        mags = []
        for a0 in (1e-2, 1e-3):
            est = numerical_derivative(
                lambda a: entropy_at(make(a)), a0, order=2, h=a0 / 4)
            mags.append(abs(est.value))
        assert mags[1] > mags[0]


def test_derivative_stencil_failure():
    with pytest.raises(StencilFailure):
        numerical_derivative(lambda a: float("nan"), 1.0)


def test_uhlmann_examples():
    rho = np.diag([0.25, 0, 0.5, 0, 0.25])
    assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    p0 = np.diag([1.0, 0, 0, 0, 0])
    p1 = np.diag([0, 1.0, 0, 0, 0])
    assert uhlmann_fidelity(p0, p1) == pytest.approx(0.0, abs=1e-12)
    sigma = np.diag([0.2737557, 0, 0.4524887, 0, 0.2737557])
    assert uhlmann_fidelity(rho, sigma) == pytest.approx(0.998868, abs=1e-6)


def test_uhlmann_symmetry_and_diagonal_rule():
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = rng.uniform(0.05, 1.0, 5)
        q = rng.uniform(0.05, 1.0, 5)
        p, q = p / p.sum(), q / q.sum()
        rho, sigma = np.diag(p), np.diag(q)
        f = uhlmann_fidelity(rho, sigma)
        assert f == pytest.approx(uhlmann_fidelity(sigma, rho), abs=1e-12)
        assert f == pytest.approx(np.sqrt(p * q).sum(), abs=1e-12)


def test_reduced_fidelity_critical_closed_form():
    for a in (0.5, 1.0, 2.0):
        got = reduced_fidelity(ModelParams.critical(a), delta=0.1)
        assert got == pytest.approx(fr_critical(a, a + 0.1), abs=1e-10)
    assert reduced_fidelity(ModelParams.critical(1.0), delta=0.1) == \
        pytest.approx(0.998868, abs=1e-6)


def test_reduced_fidelity_at_zero_offset():
    assert reduced_fidelity(ModelParams.critical(0.9), delta=0.0) == \
        pytest.approx(1.0, abs=1e-12)


def test_reduced_fidelity_dip_near_vbs_point():
    a_min = locate_extremum(
        lambda a: reduced_fidelity(ModelParams.acritical(a), delta=1e-3),
        (2.0, 3.0), kind="min")
    assert abs(a_min - SQ6) <= 0.2


def test_rfs_critical_law():
    for a in np.linspace(0.1, 3.0, 12):
        est = rfs(ModelParams.critical(a))
        law = 1 / (1 + a * a) ** 2
        assert est.fixed_delta == pytest.approx(law, rel=1e-3)
        assert est.converged
        assert est.delta_drift < 1e-3


def test_rfs_double_derivative_tracks_fixed_delta():
    est = rfs(ModelParams.critical(0.8))
    assert est.second_derivative == pytest.approx(est.fixed_delta, rel=1e-3)


def test_rfs_acritical_peak_bracket():
    a_peak = locate_extremum(
        lambda a: rfs(ModelParams.acritical(a)).fixed_delta,
        (1.5, 3.5), kind="max")
    assert 2.2 <= a_peak <= 2.7


def test_fps_examples():
    p = ModelParams.critical(1.0)
    assert fidelity_per_site(p, p) == pytest.approx(1.0, abs=1e-12)
    got = fidelity_per_site(p, ModelParams.critical(1.1))
    assert got == pytest.approx(2.1 / math.sqrt(4.42), abs=1e-12)


def test_fps_equals_reduced_fidelity_on_critical_slice():
    # family identity: both reduce to (1+aa') / sqrt((1+a^2)(1+a'^2))
    for a in (0.4, 1.0, 1.8):
        for d in (0.05, 0.3):
            fps = fidelity_per_site(ModelParams.critical(a),
                                    ModelParams.critical(a + d))
            fr = reduced_fidelity(ModelParams.critical(a), delta=d)
            assert fps == pytest.approx(fr, abs=1e-10)
            assert fps == pytest.approx(fr_critical(a, a + d), abs=1e-10)


def test_magnetization_and_fluctuation():
    mx, my, mz, fluct = magnetization_and_fluctuation(
        build_g(ModelParams(SQ6, -3.0, -2.0)))
    assert max(abs(mx), abs(my), abs(mz)) <= 1e-12
    assert fluct == pytest.approx(2.0, abs=1e-12)
    for a in (0.5, 1.0, 2.0):
        out = magnetization_and_fluctuation(build_g(ModelParams.critical(a)))
        assert out[3] == pytest.approx(4 * a * a / (1 + a * a), abs=1e-12)
    # a -> 0 limit of the critical slice: pure |0>, no fluctuation
    out = magnetization_and_fluctuation(build_g(ModelParams.critical(1e-6)))
    assert out[3] <= 1e-11


def test_locate_extremum_entropy_peaks():
    a_star = locate_extremum(
        lambda a: entropy_at(ModelParams.acritical(a)), (1.5, 3.5))
    assert abs(a_star - SQ6) <= 1e-4
    a_star = locate_extremum(
        lambda a: entropy_at(ModelParams.critical(a)), (0.5, 2.5))
    assert abs(a_star - SQ2) <= 1e-4


def test_locate_extremum_parabola():
    assert locate_extremum(lambda a: -(a - 1) ** 2, (0.0, 2.5)) == \
        pytest.approx(1.0, abs=1e-6)
    assert locate_extremum(lambda a: (a - 1) ** 2, (0.0, 2.5), kind="min") == \
        pytest.approx(1.0, abs=1e-6)


def test_locate_extremum_rejects_multimodal():
    with pytest.raises(NotUnimodal):
        locate_extremum(lambda a: math.sin(4 * a), (0.0, 3.0))


def test_correlation_length_crossings():
    got = correlation_length_crossing(-3.0, -2.0, (1.5, 3.5))
    assert abs(got - SQ6) <= 1e-3
    got = correlation_length_crossing(0.0, 1.0, (1.0, 2.0))
    assert abs(got - SQ2) <= 1e-3


def test_correlation_length_crossing_needs_sign_change():
    with pytest.raises(NotUnimodal):
        correlation_length_crossing(0.0, 1.0, (2.0, 3.0))
