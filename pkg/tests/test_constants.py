"""Closed-form thresholds, exponent windows, and the Sobolev estimate."""

import math

import numpy as np
import pytest

from nehari_fpl import (
    P_BRANCH,
    ParameterError,
    Params,
    build_grid,
    estimate_sobolev,
    mass_regime,
    mu_tilde,
    regime_report,
)


def test_mu_tilde_hand_value():
    # p = 2, q = 0.5, N = 1, s = 0.4, |domain| = 1, S = 1: the threshold
    # reduces to (0.5/8.5)^(1/16) * 8/8.5, evaluated here independently
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    hand = (0.5 / 8.5) ** (1.0 / 16.0) * 8.0 / 8.5
    rep = regime_report(p, 1.0, 1.0)
    assert rep.mu_tilde == pytest.approx(hand, rel=1e-12)
    assert hand == pytest.approx(0.7885, abs=1e-4)


def test_big_m_hand_value():
    # same parameter point, |domain| = 1: lead factor 1.7 * 0.5 / 6 and
    # inner factor 0.0625^(1.5/8.5), multiplied out by hand
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    rep = regime_report(p, 1.0, 1.0)
    hand = (1.7 * 0.5 / 6.0) * 0.0625 ** (1.5 / 8.5)
    assert rep.big_m == pytest.approx(hand, rel=1e-12)
    assert hand == pytest.approx(0.086851218064245117, rel=1e-13)
    assert round(hand, 4) == 0.0869


def test_q1_hand_value():
    p = Params(s=0.5, p=2.0, q=0.4, mu=0.05, N=4)
    rep = regime_report(p, 1.0, 1.0)
    hand = 16.0 / 10.5 - 1.0
    assert rep.q1 == pytest.approx(hand, rel=1e-12)
    assert round(hand, 4) == 0.5238


def test_q2_hand_value():
    p = Params(s=0.5, p=3.0, q=1.0, mu=0.05, N=11)
    rep = regime_report(p, 1.0, 1.0)
    hand = 33.0 / 9.5 - 1.5
    assert rep.q2 == pytest.approx(hand, rel=1e-12)
    assert round(hand, 4) == 1.9737
    # window below p - 1 stays open at these parameters
    assert rep.q2 < p.p - 1.0


def test_branch_identity_at_golden_p():
    # at the branch point p solves p/(p-1) - (p-1)/p = 1, so the N-free
    # parts of q2 and q3 coincide and the gap is exactly sp/(N - sp)
    assert P_BRANCH == pytest.approx((3.0 + math.sqrt(5.0)) / 2.0, rel=1e-15)
    for n_dim, s in ((7, 0.3), (11, 0.5), (23, 0.9)):
        p = Params(s=s, p=P_BRANCH, q=0.5 * (P_BRANCH - 1.0), mu=0.05, N=n_dim)
        rep = regime_report(p, 1.0, 1.0)
        gap = s * P_BRANCH / (n_dim - s * P_BRANCH)
        assert rep.q2 - rep.q3 == pytest.approx(gap, rel=1e-9)


def test_mu_tilde_monotone_in_sobolev_constant():
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    values = [mu_tilde(p, 2.0, s_const) for s_const in (1.0, 2.0, 4.0, 8.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_mu_tilde_monotone_in_domain_measure():
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    values = [mu_tilde(p, m, 1.0) for m in (0.5, 1.0, 2.0, 4.0)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_ps_level_decreasing_in_mu():
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    rep = regime_report(p, 1.0, 1.0)
    levels = [rep.ps_level(mu) for mu in (0.01, 0.05, 0.25)]
    assert all(b < a for a, b in zip(levels, levels[1:]))
    assert rep.ps_level_at_mu == pytest.approx(rep.ps_level(p.mu), rel=1e-15)


def test_regime_branches():
    small = regime_report(Params(s=0.5, p=2.0, q=0.4, mu=0.05, N=4), 1.0, 1.0)
    assert small.regime == "small-p"
    assert small.n0 == small.n0_small_p
    large = regime_report(Params(s=0.5, p=4.0, q=2.0, mu=0.05, N=16), 1.0, 1.0)
    assert large.regime == "large-p"
    assert large.n0 == large.n0_large_p
    # both branch values are always reported
    assert small.n0_large_p is not None
    assert large.n0_small_p is not None


def test_hypothesis_flag():
    # at p = 2 the small-p branch is active, so the window floor is
    # q0 = max(q1, q3) = q3 = 5/6 here, not q1
    ok = regime_report(Params(s=0.5, p=2.0, q=0.9, mu=0.05, N=4), 1.0, 1.0)
    assert ok.q0 == pytest.approx(5.0 / 6.0, rel=1e-12)
    assert ok.hypothesis_ok
    bad = regime_report(Params(s=0.5, p=2.0, q=0.6, mu=0.05, N=4), 1.0, 1.0)
    assert not bad.hypothesis_ok


def test_mass_regime_threshold():
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    regime, threshold = mass_regime(p)
    assert regime == 1
    assert threshold == pytest.approx((p.N * (p.p - 2.0) + p.ps) / (p.N - p.ps), rel=1e-12)
    assert threshold == pytest.approx(4.0, rel=1e-12)


def test_sobolev_estimate_converges_and_pins(params, grid64):
    est = estimate_sobolev(grid64, params, iters=600, seed=0)
    assert est.converged
    assert est.value == pytest.approx(4.52145331, rel=1e-6)
    # same seed, same descent path
    again = estimate_sobolev(grid64, params, iters=600, seed=0)
    assert again.value == est.value


def test_sobolev_estimate_mesh_stability(params):
    # refining from 128 to 257 nodes (spacing halved) moves the estimate
    # by under five percent
    g1 = build_grid(-1.0, 1.0, 128, params)
    g2 = build_grid(-1.0, 1.0, 257, params)
    e1 = estimate_sobolev(g1, params, iters=600, seed=0)
    e2 = estimate_sobolev(g2, params, iters=600, seed=0)
    assert e1.converged and e2.converged
    assert abs(e2.value - e1.value) / e1.value < 0.05


def test_regime_report_rejects_bad_inputs():
    p = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    with pytest.raises(ParameterError):
        regime_report(p, -1.0, 1.0)
    with pytest.raises(ParameterError):
        regime_report(p, 1.0, 0.0)
