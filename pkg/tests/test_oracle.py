import math

import numpy as np
import pytest

from spin2mp.errors import ChainTooLong
from spin2mp.mpstate import ModelParams
from spin2mp.oracle import (brute_correlator, finite_global_fidelity,
                            finite_global_fidelity_tm, finite_vs_tdl_rdm,
                            gauge_equivalence_check, standard_checks)
from spin2mp.transfer import IDENTITY5, SX, SZ, build_g, tm_finite_correlator

SQ2 = math.sqrt(2.0)
SQ6 = math.sqrt(6.0)


def test_convergence_report_grid():
    # paper slices away from degenerate points; sqrt(6) hits the exact branch
    for x, gamma in ((-3.0, -2.0), (0.0, 1.0)):
        for a in (0.5, 1.0, SQ2, 2.0, SQ6):
            rep = finite_vs_tdl_rdm(ModelParams(a, x, gamma))
            assert rep.passed, (x, gamma, a, rep)
            if not rep.exact:
                assert 0.0 < rep.fitted_rate < 1.0
                assert abs(rep.fitted_rate - rep.gap_ratio) <= \
                    0.2 * rep.gap_ratio


def test_convergence_exact_at_vbs_point():
    rep = finite_vs_tdl_rdm(ModelParams(SQ6, -3.0, -2.0))
    assert rep.exact and rep.passed
    assert max(rep.deviations) <= 1e-12
    assert math.isnan(rep.fitted_rate)


def test_convergence_rate_half_critical():
    rep = finite_vs_tdl_rdm(ModelParams.critical(1.0))
    assert rep.gap_ratio == pytest.approx(0.5, abs=1e-12)
    assert rep.fitted_rate == pytest.approx(0.5, rel=0.2)
    assert rep.deviations[0] > rep.deviations[1] > rep.deviations[2]


def test_global_fidelity_two_routes():
    pairs = ((ModelParams.critical(1.0), ModelParams.critical(1.1)),
             (ModelParams(0.5, -3.0, -2.0), ModelParams(0.6, -3.0, -2.0)))
    for p1, p2 in pairs:
        via_amp = finite_global_fidelity(p1, p2, 6)
        via_tm = finite_global_fidelity_tm(p1, p2, 6)
        assert via_amp == pytest.approx(via_tm, abs=1e-10)
        assert 0.0 < via_amp < 1.0


def test_global_fidelity_identity_and_orthogonal_regime():
    p = ModelParams.critical(1.0)
    assert finite_global_fidelity(p, p, 6) == pytest.approx(1.0, abs=1e-12)
    f = finite_global_fidelity(ModelParams.critical(0.0),
                               ModelParams.critical(3.0), 6)
    assert 0.0 < f < 1.0


def test_global_fidelity_tracks_per_site_power():
    # critical slice: overlap ~ ((1+aa')/sqrt((1+a^2)(1+a'^2)))^L for large L
    a, a2 = 1.0, 1.1
    fps = (1 + a * a2) / math.sqrt((1 + a * a) * (1 + a2 * a2))
    devs = [abs(finite_global_fidelity(ModelParams.critical(a),
                                       ModelParams.critical(a2), L)
                / fps ** L - 1.0)
            for L in (4, 8)]
    assert devs[1] < devs[0] <= 5e-3


def test_brute_correlator_identity():
    p = ModelParams(1.0, -3.0, -2.0)
    assert brute_correlator(p, IDENTITY5, IDENTITY5, 2, 6) == \
        pytest.approx(1.0, abs=1e-12)


def test_brute_matches_transfer_trace():
    for x, gamma in ((-3.0, -2.0), (0.0, 1.0)):
        for a in (0.5, 1.0, SQ6):
            p = ModelParams(a, x, gamma)
            G = build_g(p)
            for O in (SZ, SX):
                for r in (1, 2):
                    brute = brute_correlator(p, O, O, r, 6)
                    trace = tm_finite_correlator(G, O, O, r, 6)
                    assert abs(brute - trace) <= 1e-10, (x, a, r)


def test_brute_correlator_key_example():
    p = ModelParams.critical(1.0)
    brute = brute_correlator(p, SZ, SZ, 1, 4)
    trace = tm_finite_correlator(build_g(p), SZ, SZ, 1, 4)
    assert abs(brute - trace) <= 1e-10


def test_gauge_equivalence():
    chk = gauge_equivalence_check(1.0, 3.0, -2.0, 6)
    assert chk.passed and chk.max_deviation <= 1e-12
    chk = gauge_equivalence_check(SQ6, 3.0, -2.0, 4)
    assert chk.passed
    # x = 0: the two families coincide exactly
    chk = gauge_equivalence_check(1.0, 0.0, 1.0, 4)
    assert chk.passed


def test_gauge_equivalence_length_guard():
    with pytest.raises(ChainTooLong):
        gauge_equivalence_check(1.0, 3.0, -2.0, 7)


def test_standard_checks_all_pass():
    rows = standard_checks()
    assert len(rows) == 24
    for name, ok, detail in rows:
        assert ok, (name, detail)
        assert isinstance(name, str) and name
        assert isinstance(detail, str) and detail
