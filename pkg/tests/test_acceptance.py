"""End-to-end acceptance checks, one test per criterion.

Each test states its tolerance inline and is independent of the others.
Two tests fail on purpose and stay failing:

* test_criterion_7_bubble_scaling_exponents: the measured ladder slopes
  for A1, A4 and the concave mass trail their eps -> 0 rates by more than
  the 15% allowance.  The gap is intrinsic to the reachable scales, not a
  discretization artifact: continuum quadrature of the same integrals
  reproduces the discrete values to five digits, and the two-term expansion
  a * eps^0.1 - c * eps^0.9 of A1 shows the window slope must sit near 0.08
  until eps is orders of magnitude smaller than the collar allows.

* test_criterion_9_sign_changing_solution: the unconstrained gradient of
  the two-part iterate cannot fall below the nonlocal pairing between the
  parts (cross_plus / cross_minus, about 0.16 at n = 128), because moving
  mass of one sign always interacts with the other sign through the kernel.
  The residual therefore floors around that value and the converged flag
  stays false; every structural clause of the criterion that does not
  require the flag is asserted and passes.
"""

import time

import numpy as np
import pytest

from nehari_fpl import (
    FiberMap,
    GridFunction,
    NehariTag,
    Params,
    build_grid,
    default_bubble,
    energy,
    estimate_sobolev,
    fiber_roots,
    fit_exponent,
    form_a,
    gradient,
    interaction_integrals,
    ladder,
    lebesgue_mass,
    lq_mass_scaling,
    make_u_eps,
    mass_regime,
    mu_tilde,
    part_scales,
    regime_report,
    seminorm_p,
    solve_positive,
    solve_sign_changing,
    split_parts,
)
from nehari_fpl.cli import main

PARAMS = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)


def test_criterion_1_gradient_consistency():
    # directional finite differences of the energy match the assembled
    # gradient within 1e-5 relative on 100 seeded draws at n = 64
    start = time.perf_counter()
    grid = build_grid(-1.0, 1.0, 64, PARAMS)
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        u = GridFunction(grid, rng.standard_normal(grid.n))
        d = GridFunction(grid, rng.standard_normal(grid.n))
        g = gradient(u, PARAMS)
        analytic = float(np.dot(g.values, d.values))
        eps = 1e-6 * float(np.max(np.abs(u.values))) / float(np.max(np.abs(d.values)))
        ep = energy(u.with_values(u.values + eps * d.values), PARAMS).total
        em = energy(u.with_values(u.values - eps * d.values), PARAMS).total
        fd = (ep - em) / (2.0 * eps)
        worst = max(worst, abs(fd - analytic) / max(abs(analytic), 1e-300))
    assert worst <= 1e-5
    assert time.perf_counter() - start < 30.0


def _scan_roots(fm, mu, n_points=1_000_001):
    """Dense two-stage t-scan oracle for the two fiber roots.

    The scalar equation psi(t) = mu * m_q is recomputed here from the raw
    masses; a geometric sweep brackets both sign changes and a uniform
    subscan inside each bracketing cell pins the root.
    """
    c = mu * fm.mass_q
    a, b = fm.p - 1.0 - fm.q, fm.pstar - fm.q - 1.0

    def psi(t):
        return t ** a * fm.norm_p - t ** b * fm.mass_star

    t0 = fm.t0()
    coarse = np.geomspace(1e-6 * t0, 4.0 * t0, n_points)
    f = psi(coarse) - c
    flips = np.nonzero(f[:-1] * f[1:] < 0.0)[0]
    assert len(flips) == 2
    roots = []
    for k in flips:
        sub = np.linspace(coarse[k], coarse[k + 1], n_points)
        fs = psi(sub) - c
        j = int(np.nonzero(fs[:-1] * fs[1:] < 0.0)[0][0])
        roots.append(0.5 * (sub[j] + sub[j + 1]))
    return roots


def test_criterion_2_fibering_matches_dense_scan():
    grid = build_grid(-1.0, 1.0, 64, PARAMS)
    rng = np.random.default_rng(0)
    for _ in range(100):
        u = GridFunction(grid, rng.standard_normal(grid.n))
        fm = FiberMap.of(u, PARAMS)
        mu_crit = fm.psi(fm.t0()) / fm.mass_q
        mu = (0.05 + 0.9 * rng.random()) * mu_crit
        local = Params(PARAMS.s, PARAMS.p, PARAMS.q, mu, PARAMS.N)
        rep = fiber_roots(u, local)
        assert 0.0 < rep.tminus < rep.t0 < rep.tplus
        lo, hi = _scan_roots(FiberMap.of(u, local), mu)
        assert abs(rep.tminus - lo) <= 1e-6 * lo
        assert abs(rep.tplus - hi) <= 1e-6 * hi


def test_criterion_3_manifold_energy_expressions():
    # on the manifold the energy collapses to three reduced forms; all
    # four evaluations agree within 1e-10 of the largest magnitude
    grid = build_grid(-1.0, 1.0, 64, PARAMS)
    rng = np.random.default_rng(0)
    p, q, pstar, mu = PARAMS.p, PARAMS.q, PARAMS.pstar, PARAMS.mu
    for _ in range(50):
        u = GridFunction(grid, rng.standard_normal(grid.n))
        rep = fiber_roots(u, PARAMS)
        for t in (rep.tminus, rep.tplus):
            v = u.with_values(t * u.values)
            norm = seminorm_p(v, PARAMS)
            m_q = lebesgue_mass(v, q + 1.0)
            m_star = lebesgue_mass(v, pstar)
            exprs = (
                norm / p - mu * m_q / (q + 1.0) - m_star / pstar,
                (1.0 / p - 1.0 / pstar) * norm - mu * (1.0 / (q + 1.0) - 1.0 / pstar) * m_q,
                (1.0 / p - 1.0 / (q + 1.0)) * norm + (1.0 / (q + 1.0) - 1.0 / pstar) * m_star,
                mu * (1.0 / p - 1.0 / (q + 1.0)) * m_q + (1.0 / p - 1.0 / pstar) * m_star,
            )
            spread = max(exprs) - min(exprs)
            assert spread <= 1e-10 * max(abs(e) for e in exprs)


def test_criterion_4_sign_structure_inequalities():
    grid = build_grid(-1.0, 1.0, 64, PARAMS)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        u = GridFunction(grid, rng.standard_normal(grid.n))
        plus, minus = split_parts(u)
        assert plus.values.any() and minus.values.any()
        # seminorm superadditivity, strict for sign-changing u
        gap = seminorm_p(u, PARAMS) - seminorm_p(plus, PARAMS) - seminorm_p(minus, PARAMS)
        assert gap > 0.0
        # mass additivity is exact up to summation order
        for r in (PARAMS.q + 1.0, PARAMS.pstar):
            whole = lebesgue_mass(u, r)
            split = lebesgue_mass(plus, r) + lebesgue_mass(minus, r)
            assert abs(split - whole) <= 1e-13 * abs(whole)
        # energy split, strict for sign-changing u
        neg = minus.with_values(-minus.values)
        egap = energy(u, PARAMS).total - energy(plus, PARAMS).total - energy(neg, PARAMS).total
        assert egap > 0.0
        # pairing against the negative part over-collects its seminorm
        assert form_a(u, neg, PARAMS) - seminorm_p(minus, PARAMS) > 0.0


def test_criterion_5_zero_stratum_empty_below_threshold():
    grid = build_grid(-1.0, 1.0, 64, PARAMS)
    est = estimate_sobolev(grid, PARAMS, iters=600, seed=0)
    assert est.converged
    mu = 0.5 * mu_tilde(PARAMS, grid.b - grid.a, est.value)
    local = Params(PARAMS.s, PARAMS.p, PARAMS.q, mu, PARAMS.N)
    rng = np.random.default_rng(0)
    for _ in range(500):
        u = GridFunction(grid, rng.standard_normal(grid.n))
        rep = fiber_roots(u, local, tol_manifold=1e-8)
        assert rep.class_minus.tag is not NehariTag.ZERO
        assert rep.class_plus.tag is not NehariTag.ZERO


def test_criterion_6_closed_form_constants():
    # hand evaluations, independent arithmetic, 1e-6 relative
    rep = regime_report(Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1), 1.0, 1.0)
    assert abs(rep.mu_tilde - (0.5 / 8.5) ** (1.0 / 16.0) * 8.0 / 8.5) <= 1e-6 * rep.mu_tilde
    assert abs(rep.big_m - (1.7 * 0.5 / 6.0) * 0.0625 ** (1.5 / 8.5)) <= 1e-6 * rep.big_m
    rep4 = regime_report(Params(s=0.5, p=2.0, q=0.4, mu=0.05, N=4), 1.0, 1.0)
    assert abs(rep4.q1 - (16.0 / 10.5 - 1.0)) <= 1e-6 * rep4.q1
    rep11 = regime_report(Params(s=0.5, p=3.0, q=1.0, mu=0.05, N=11), 1.0, 1.0)
    assert abs(rep11.q2 - (33.0 / 9.5 - 1.5)) <= 1e-6 * rep11.q2
    # four-digit reference values
    assert rep.mu_tilde == pytest.approx(0.7885, abs=1e-4)
    assert rep.big_m == pytest.approx(0.0869, abs=1e-4)
    assert rep4.q1 == pytest.approx(0.5238, abs=1e-4)
    assert rep11.q2 == pytest.approx(1.9737, abs=1e-4)


def test_criterion_7_bubble_scaling_exponents():
    # KNOWN FAILURE: measured slopes 0.081 (A1), 0.046 (A4), 0.117 (mass)
    # against theory 0.1 / 0.9 / 0.15; see the module docstring
    start = time.perf_counter()
    grid = build_grid(-1.0, 1.0, 256, PARAMS)
    base = default_bubble(grid, PARAMS)
    specs = ladder(base, [f * grid.halfwidth for f in (0.1, 0.05, 0.025, 0.0125)])
    eps = [sp.eps for sp in specs]
    w = GridFunction(grid, np.ones(grid.n))
    a1 = fit_exponent(
        eps, [interaction_integrals(w, grid, PARAMS, sp, "A1") for sp in specs], theory=0.1
    )
    a4 = fit_exponent(
        eps, [interaction_integrals(w, grid, PARAMS, sp, "A4") for sp in specs], theory=0.9
    )
    mass = lq_mass_scaling(grid, PARAMS, specs)
    regime, _ = mass_regime(PARAMS)
    assert regime == 1
    assert mass.theory == pytest.approx(0.15, rel=1e-12)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    assert abs(a1.slope - a1.theory) <= 0.15 * a1.theory
    assert abs(a4.slope - a4.theory) <= 0.15 * a4.theory
    assert abs(mass.slope - mass.theory) <= 0.15 * mass.theory


def test_criterion_8_positive_solution():
    grid = build_grid(-1.0, 1.0, 128, PARAMS)
    res = solve_positive(grid, PARAMS, seed=0)
    scale = 1.0 + abs(res.energy)
    assert res.converged
    assert res.residual_norm <= 1e-6 * scale
    assert res.minus_part_norm <= 1e-8 * scale
    assert np.all(res.u.values >= 0.0)
    rep = fiber_roots(res.u, PARAMS)
    assert abs(rep.tplus - 1.0) <= 1e-6


def test_criterion_9_sign_changing_solution():
    # KNOWN FAILURE on the converged flag: the unconstrained residual
    # floors at the nonlocal cross pairing; see the module docstring
    start = time.perf_counter()
    grid = build_grid(-1.0, 1.0, 128, PARAMS)
    pos = solve_positive(grid, PARAMS, seed=0)
    est = estimate_sobolev(grid, PARAMS, iters=600, seed=0)
    res = solve_sign_changing(grid, PARAMS, seed=0, w1=pos.u, s_est=est.value)
    # structural clauses
    assert res.plus_part_norm > 0.0 and res.minus_part_norm > 0.0
    assert res.plus_class.tag is NehariTag.MINUS
    assert res.minus_class.tag is NehariTag.MINUS
    assert res.energy > pos.energy
    # bracket blowup of the negative-part rescaling near the lower edge
    spec = default_bubble(grid, PARAMS)
    ue = make_u_eps(grid, PARAMS, spec)
    mask = ue.values > 1e-12 * float(np.max(np.abs(ue.values)))
    ratios = pos.u.values[mask] / ue.values[mask]
    rbar1, rbar2 = float(np.min(ratios)), float(np.max(ratios))
    _, sm_mid = part_scales(pos.u, ue, PARAMS, 0.5 * (rbar1 + rbar2))
    _, sm_edge = part_scales(pos.u, ue, PARAMS, rbar1 + 1e-3 * (rbar2 - rbar1))
    assert sm_edge > 10.0 * sm_mid
    assert time.perf_counter() - start < 300.0
    # convergence clause, the honest failure
    assert res.converged
    assert res.residual_norm <= 1e-6 * (1.0 + abs(res.energy))


def test_criterion_10_deterministic_reports(tmp_path):
    fast = ["--set", "grid.n=48", "--set", "solver.max_iters=400"]
    pairs = []
    for sub, extra in (
        ("constants", []),
        ("energy-check", ["--set", "checks.n=32"]),
        ("solve-positive", fast),
        ("solve-sign-changing", fast),
    ):
        d1 = tmp_path / f"{sub}-a"
        d2 = tmp_path / f"{sub}-b"
        for d in (d1, d2):
            main([sub, "--out", str(d)] + extra)
        pairs.append((d1 / f"{sub}.report.txt", d2 / f"{sub}.report.txt"))
    for f1, f2 in pairs:
        with open(f1, "rb") as a, open(f2, "rb") as b:
            assert a.read() == b.read()
