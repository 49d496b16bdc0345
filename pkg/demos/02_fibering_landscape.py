"""Trace one fiber of the energy and its two-root structure.

For a fixed random direction u the map t -> I(t u) has at most two
stationary points: a local minimum t- and a local maximum t+ on either
side of the peak t0 of the auxiliary psi.  The demo sweeps mu from far
below the per-ray critical value up to it, showing the roots merge and
then vanish.
"""

import numpy as np

from nehari_fpl import (
    FiberMap,
    GridFunction,
    NoRootsError,
    Params,
    build_grid,
    fiber_roots,
)


def main():
    base = Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)
    g = build_grid(-1.0, 1.0, 64, base)
    rng = np.random.default_rng(7)
    u = GridFunction(g, rng.standard_normal(g.n))

    fm = FiberMap.of(u, base)
    t0 = fm.t0()
    mu_crit = fm.psi(t0) / fm.mass_q
    print(f"peak location t0        {t0:.8f}")
    print(f"peak value psi(t0)      {fm.psi(t0):.8f}")
    print(f"per-ray critical mu     {mu_crit:.8f}")

    print("\n   mu/mu_crit        t-          t0          t+     phi''(t-)>0  phi''(t+)<0")
    for frac in (0.05, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999):
        local = Params(base.s, base.p, base.q, frac * mu_crit, base.N)
        rep = fiber_roots(u, local)
        print(
            f"   {frac:10.3f}  {rep.tminus:10.6f}  {rep.t0:10.6f}  {rep.tplus:10.6f}"
            f"   {rep.class_minus.second_deriv > 0.0!s:>9}    {rep.class_plus.second_deriv < 0.0!s:>9}"
        )

    print("\nabove the critical value the scalar equation has no roots:")
    over = Params(base.s, base.p, base.q, 1.01 * mu_crit, base.N)
    try:
        fiber_roots(u, over)
    except NoRootsError as exc:
        print(f"  NoRootsError: {exc}")

    print("\nfiber energies at the two roots (the maximum side is higher):")
    rep = fiber_roots(u, base)
    for label, t in (("t-", rep.tminus), ("t+", rep.tplus)):
        print(f"  I({label} u) = {fm.phi(t):12.6f}")


if __name__ == "__main__":
    main()
