"""Closed-form thresholds and the discrete Sobolev quotient.

Reproduces the hand-derived reference constants, then estimates the
discrete Sobolev constant on a refinement ladder and reports the mesh
stability of the resulting two-root threshold.
"""

from nehari_fpl import Params, build_grid, estimate_sobolev, mu_tilde, regime_report


def main():
    params = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)

    print("-- reference constants at unit measure and unit Sobolev constant --")
    rep = regime_report(params, 1.0, 1.0)
    print(f"two-root threshold mu~      {rep.mu_tilde:.12f}  (hand: 0.7885)")
    print(f"compactness prefactor M     {rep.big_m:.12f}  (hand: 0.0869)")
    rep4 = regime_report(Params(s=0.5, p=2.0, q=0.4, mu=0.05, N=4), 1.0, 1.0)
    print(f"exponent bound q1 (N=4)     {rep4.q1:.12f}  (hand: 0.5238)")
    rep11 = regime_report(Params(s=0.5, p=3.0, q=1.0, mu=0.05, N=11), 1.0, 1.0)
    print(f"exponent bound q2 (N=11)    {rep11.q2:.12f}  (hand: 1.9737)")

    print("\n-- exponent window bookkeeping --")
    print(f"active branch               {rep4.regime}")
    print(f"window floor q0             {rep4.q0:.6f}")
    print(f"dimension threshold n0      {rep4.n0:.1f}")
    print(f"(q, N) inside the window    {rep4.hypothesis_ok}")

    print("\n-- discrete Sobolev quotient on a refinement ladder --")
    print("    n    estimate   converged    mu~ on (-1, 1)")
    last = None
    for n in (64, 128, 256):
        g = build_grid(-1.0, 1.0, n, params)
        est = estimate_sobolev(g, params, iters=600, seed=0)
        thr = mu_tilde(params, g.b - g.a, est.value)
        print(f"  {n:4d}  {est.value:10.6f}  {est.converged!s:>9}   {thr:.8f}")
        if last is not None:
            print(f"        change from previous level: {abs(est.value - last) / last:.2%}")
        last = est.value


if __name__ == "__main__":
    main()
