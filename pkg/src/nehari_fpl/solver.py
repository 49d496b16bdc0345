"""Constrained descent on the unstable side of the manifold.

Both solvers are projected gradient descent: take an explicit gradient
step, rescale back onto the fiber maximum (whole ray for the positive
solve, each sign part separately for the sign-changing solve), and accept
the step only if the projected energy satisfies an Armijo decrease.  The
projection is the fiber maximum, so on the manifold the envelope theorem
makes the accepted-step energy sequence genuinely nonincreasing.

The descent direction is the gradient divided by the mesh width h (the
Riesz representative in the discrete L2 inner product h * sum u_i v_i),
which keeps step sizes mesh independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bubble import DEFAULT_DELTA_FRAC, DEFAULT_EPS_FRACS, BubbleSpec, make_u_eps
from .energy import energy, form_a, gradient, seminorm_p, split_parts
from .errors import (
    CollapseError,
    DegenerateInputError,
    NoCrossingError,
    NoRootsError,
    ParameterError,
    SolverError,
)
from .fibering import FiberMap, NehariClass, classify
from .grid import Grid, GridFunction, Params

ARMIJO_C = 1e-4
ARMIJO_SHRINK = 0.5
ALPHA_FLOOR = 1e-16
COLLAPSE_FACTOR = 1e-10


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a constrained descent run.

    plus_class / minus_class hold the part classifications of a
    sign-changing run; the c2 / gap fields compare the sign-changing level
    against its structural lower and upper bounds when the inputs needed
    for them are available.  cross_plus / cross_minus record the pairing
    of the full gradient with each part at the final iterate.  For a
    two-part function this pairing equals the nonlocal cross interaction
    of the parts, which is strictly positive, so it is the floor under the
    full-gradient residual of any two-part run.
    """

    u: GridFunction
    energy: float
    residual_norm: float
    iterations: int
    nehari: NehariClass
    plus_part_norm: float
    minus_part_norm: float
    converged: bool
    restarts: int = 0
    plus_class: NehariClass | None = None
    minus_class: NehariClass | None = None
    crossing: "CrossingResult | None" = None
    c2_split_lower: float | None = None
    split_ok: bool | None = None
    ps_gap_bound: float | None = None
    ps_gap_ok: bool | None = None
    cross_plus: float | None = None
    cross_minus: float | None = None


@dataclass(frozen=True)
class FiberSupremum:
    """Supremum of the ray energy over t >= 0.

    via_roots is False when the two-root analysis failed and the value had
    to come from a dense scan of the ray instead.
    """

    value: float
    via_roots: bool
    t_at: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class CrossingResult:
    """Matched two-part scaling a*(w1 - r*u_eps) produced by the crossing search."""

    r: float
    a: float
    b: float
    ansatz: GridFunction
    bracket: tuple
    s_plus: float
    s_minus: float
    class_plus_part: NehariClass
    class_minus_part: NehariClass


@dataclass(frozen=True)
class SupScanResult:
    """Maximum of I(a*w1 - b*u_eps) over the scanned (a, b) rectangle."""

    value: float
    a_at: float
    b_at: float
    coarse_value: float

    def __float__(self) -> float:
        return self.value


def _project_ray(u: GridFunction, params: Params, plus_variant: bool = False):
    fm = FiberMap.of(u, params, plus_variant)
    tplus = fm.roots()[1]
    return u.with_values(tplus * u.values), tplus


def project_minus(u: GridFunction, params: Params, plus_variant: bool = False) -> GridFunction:
    """Rescale u onto the fiber maximum t+(u) * u."""
    return _project_ray(u, params, plus_variant)[0]


def _project_parts(u: GridFunction, params: Params):
    """Rescale each sign part onto its own fiber maximum."""
    plus, minus = split_parts(u)
    plus_scaled, tp = _project_ray(plus, params)
    minus_scaled, tm = _project_ray(minus, params)
    return u.with_values(plus_scaled.values - minus_scaled.values), (tp, tm)


def _positive_bump(grid: Grid, rng) -> GridFunction:
    base = np.sin(np.pi * (grid.nodes - grid.a) / (grid.b - grid.a))
    return GridFunction(grid, base * (0.8 + 0.4 * rng.random(grid.n)))


def solve_positive(
    grid: Grid,
    params: Params,
    seed: int = 0,
    max_iters: int = 5000,
    *,
    tol_res: float = 1e-6,
    tol_manifold: float = 1e-8,
    max_restarts: int = 5,
) -> SolveResult:
    """Minimize the plus-variant energy over the unstable manifold side.

    Needs mu below the two-root threshold of the configuration so the
    projection exists everywhere it is asked for.  The plus-variant
    Lebesgue terms reward only the positive part while the seminorm pays
    for both, so descent starves the negative part; the result's negative
    part seminorm is reported through minus_part_norm and shrinks to
    rounding level at convergence.
    """
    rng = np.random.default_rng(seed)
    restarts_used = 0
    iterations = 0
    u = None
    for attempt in range(max_restarts + 1):
        start = _positive_bump(grid, rng)
        try:
            candidate = _project_ray(start, params, plus_variant=True)[0]
        except (NoRootsError, DegenerateInputError):
            restarts_used = attempt + 1
            continue
        u, iterations, stalled = _descend(
            candidate, params, max_iters - iterations, tol_res, plus_variant=True,
            iterations_base=iterations,
        )
        g = gradient(u, params, plus_variant=True)
        e_total = energy(u, params, plus_variant=True).total
        if float(np.max(np.abs(g.values))) <= tol_res * (1.0 + abs(e_total)):
            break
        restarts_used = attempt + 1
        if iterations >= max_iters:
            break
    if u is None:
        # every start failed to project; report the last bump, unconverged
        u = _positive_bump(grid, rng)
    e_total = energy(u, params, plus_variant=True).total
    res = float(np.max(np.abs(gradient(u, params, plus_variant=True).values)))
    plus, minus = split_parts(u)
    return SolveResult(
        u=u,
        energy=e_total,
        residual_norm=res,
        iterations=iterations,
        nehari=classify(u, params, tol_manifold, plus_variant=True),
        plus_part_norm=seminorm_p(plus, params),
        minus_part_norm=seminorm_p(minus, params),
        converged=res <= tol_res * (1.0 + abs(e_total)),
        restarts=restarts_used,
    )


def _descend(u, params, budget, tol_res, *, plus_variant, iterations_base,
             project=None, on_accept=None):
    """Shared projected-descent loop; returns (u, iterations, stalled)."""
    if project is None:
        def project(v):
            return _project_ray(v, params, plus_variant=plus_variant)[0]
    h = u.grid.h
    e_total = energy(u, params, plus_variant=plus_variant).total
    iterations = iterations_base
    stalled = False
    for _ in range(max(budget, 0)):
        iterations += 1
        g = gradient(u, params, plus_variant=plus_variant).values
        if float(np.max(np.abs(g))) <= tol_res * (1.0 + abs(e_total)):
            iterations -= 1
            break
        d = -g / h
        slope = float(np.dot(g, d))
        alpha = 1.0
        accepted = False
        while alpha >= ALPHA_FLOOR:
            try:
                trial = project(u.with_values(u.values + alpha * d))
            except (NoRootsError, DegenerateInputError):
                alpha *= ARMIJO_SHRINK
                continue
            e_trial = energy(trial, params, plus_variant=plus_variant).total
            if e_trial <= e_total + ARMIJO_C * alpha * slope:
                accepted = True
                break
            alpha *= ARMIJO_SHRINK
        if not accepted:
            stalled = True
            break
        u, e_total = trial, e_trial
        if on_accept is not None:
            on_accept(u)
    return u, iterations, stalled


def sup_over_fiber(u0: GridFunction, params: Params, plus_variant: bool = False) -> FiberSupremum:
    """Supremum of the ray energy t -> I(t * u0) over t >= 0.

    With both ray roots present this is the closed-form value at t+; when
    the roots are missing (concave mass above the peak) the ray energy is
    strictly decreasing, and the reported value comes from a dense scan.
    """
    fm = FiberMap.of(u0, params, plus_variant)
    try:
        tplus = fm.roots()[1]
        return FiberSupremum(float(fm.phi(tplus)), True, tplus)
    except NoRootsError:
        t_grid = np.linspace(0.0, 4.0 * fm.t0(), 200001)
        vals = fm.phi(t_grid)
        k = int(np.argmax(vals))
        return FiberSupremum(float(vals[k]), False, float(t_grid[k]))


def part_scales(w1: GridFunction, u_eps: GridFunction, params: Params, r: float):
    """Fiber-maximum scalings (s+, s-) of the parts of w1 - r * u_eps."""
    v = w1.values - r * u_eps.values
    vp = np.maximum(v, 0.0)
    vm = np.maximum(-v, 0.0)
    if not vp.any() or not vm.any():
        raise DegenerateInputError(f"w1 - r*u_eps has no sign change at r = {r}")
    s_plus = FiberMap.of(w1.with_values(vp), params).roots()[1]
    s_minus = FiberMap.of(w1.with_values(vm), params).roots()[1]
    return s_plus, s_minus


def crossing_search(
    w1: GridFunction,
    u_eps: GridFunction,
    params: Params,
    tol_cross: float = 1e-6,
) -> CrossingResult:
    """Find r with matched part scalings s+(r) = s-(r) =: a.

    The admissible ratios r live between rbar1 = min(w1/u_eps) and
    rbar2 = max(w1/u_eps) over nodes carrying bubble mass.  As r falls to
    rbar1 the negative part vanishes and s- blows up; as r rises to rbar2
    the positive part vanishes and s+ blows up.  Continuity in between
    forces a crossing, located here by bisection on s+ - s-.
    """
    uv = u_eps.values
    peak = float(np.max(np.abs(uv)))
    if peak <= 0.0:
        raise DegenerateInputError("u_eps vanishes identically")
    mask = uv > 1e-12 * peak
    if not np.any(mask):
        raise DegenerateInputError("u_eps has no nodes above the mass threshold")
    ratios = w1.values[mask] / uv[mask]
    r1, r2 = float(np.min(ratios)), float(np.max(ratios))
    width = r2 - r1
    if not width > 0.0:
        raise NoCrossingError("ratio bracket is a single point", [])
    trace = []

    def eval_gap(r):
        s_plus, s_minus = part_scales(w1, u_eps, params, r)
        trace.append((r, s_plus, s_minus))
        return s_plus - s_minus, s_plus, s_minus

    def probe(from_end, sign):
        off = 1e-6 * width
        for _ in range(60):
            r = from_end + sign * off
            try:
                return r, eval_gap(r)
            except DegenerateInputError:
                off *= 2.0
        raise NoCrossingError("could not find valid probes inside the bracket", trace)

    lo, (gap_lo, *_rest) = probe(r1, +1.0)
    hi, (gap_hi, *_rest) = probe(r2, -1.0)
    if not (gap_lo < 0.0 < gap_hi):
        raise NoCrossingError(
            f"no sign change of s+ - s- on [{lo:.6g}, {hi:.6g}]", trace
        )
    r_star, s_plus, s_minus = lo, math.nan, math.nan
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        gap, s_plus, s_minus = eval_gap(mid)
        r_star = mid
        if abs(gap) <= tol_cross * max(abs(s_plus), abs(s_minus)):
            break
        if gap < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * width:
            break
    else:
        raise NoCrossingError("crossing bisection did not converge", trace)
    a = 0.5 * (s_plus + s_minus)
    ansatz = w1.with_values(a * (w1.values - r_star * uv))
    plus, minus = split_parts(ansatz)
    tol_cls = max(1e-8, 10.0 * tol_cross)
    return CrossingResult(
        r=r_star,
        a=a,
        b=a * r_star,
        ansatz=ansatz,
        bracket=(r1, r2),
        s_plus=s_plus,
        s_minus=s_minus,
        class_plus_part=classify(plus, params, tol_cls),
        class_minus_part=classify(minus, params, tol_cls),
    )


def default_bubble(grid: Grid, params: Params) -> BubbleSpec:
    """Bubble used by the sign-changing pipeline when none is configured."""
    kind = "exact-p2" if params.p == 2.0 else "model"
    return BubbleSpec(
        DEFAULT_EPS_FRACS[0] * grid.halfwidth, DEFAULT_DELTA_FRAC * grid.halfwidth, None, kind
    )


def solve_sign_changing(
    grid: Grid,
    params: Params,
    seed: int = 0,
    max_iters: int = 5000,
    *,
    w1: GridFunction | None = None,
    bubble: BubbleSpec | None = None,
    tol_res: float = 1e-6,
    tol_manifold: float = 1e-8,
    tol_cross: float = 1e-6,
    max_restarts: int = 5,
    s_est: float | None = None,
) -> SolveResult:
    """Two-part descent from the crossing ansatz.

    Runs the positive solve first (unless w1 is supplied), builds the
    bubble, matches the part scalings with crossing_search, then descends
    the full energy while keeping both parts on their fiber maxima.  If
    the crossing fails for the configured bubble the search retries with a
    geometrically shrunken concentration scale, at most max_restarts times.
    """
    alpha_minus = None
    if w1 is None:
        pos = solve_positive(
            grid, params, seed=seed, max_iters=max_iters,
            tol_res=tol_res, tol_manifold=tol_manifold,
        )
        if not pos.converged:
            raise SolverError("positive solve did not converge; cannot seed the crossing")
        w1 = pos.u
        alpha_minus = pos.energy
    else:
        alpha_minus = energy(w1, params).total
    if bubble is None:
        bubble = default_bubble(grid, params)

    cross = None
    restarts_used = 0
    for attempt in range(max_restarts + 1):
        spec = BubbleSpec(
            bubble.eps * 0.85 ** attempt, bubble.delta, bubble.center, bubble.profile_kind
        )
        u_eps = make_u_eps(grid, params, spec)
        try:
            cross = crossing_search(w1, u_eps, params, tol_cross=tol_cross)
            break
        except (NoRootsError, NoCrossingError, DegenerateInputError):
            restarts_used = attempt + 1
            continue
    if cross is None:
        raise SolverError(
            f"crossing search failed for every bubble scale after {restarts_used} restarts"
        )

    u, _ = _project_parts(cross.ansatz, params)
    scale_norm = seminorm_p(u, params)

    def check_parts(v):
        nonlocal scale_norm
        scale_norm = seminorm_p(v, params)
        plus, minus = split_parts(v)
        for name, part in (("plus", plus), ("minus", minus)):
            norm = seminorm_p(part, params)
            if norm < COLLAPSE_FACTOR * scale_norm:
                raise CollapseError(name, norm, scale_norm)

    u, iterations, _stalled = _descend(
        u, params, max_iters, tol_res, plus_variant=False, iterations_base=0,
        project=lambda v: _project_parts(v, params)[0],
        on_accept=check_parts,
    )

    e_total = energy(u, params).total
    res = float(np.max(np.abs(gradient(u, params).values)))
    plus, minus = split_parts(u)
    e_plus = energy(plus, params).total
    e_minus = energy(minus, params).total
    ps_gap_bound = None
    ps_gap_ok = None
    if s_est is not None:
        s, N, p = params.s, params.N, params.p
        ps_gap_bound = alpha_minus + (s / N) * float(s_est) ** (N / (s * p))
        ps_gap_ok = e_total < ps_gap_bound
    return SolveResult(
        u=u,
        energy=e_total,
        residual_norm=res,
        iterations=iterations,
        nehari=classify(u, params, tol_manifold),
        plus_part_norm=seminorm_p(plus, params),
        minus_part_norm=seminorm_p(minus, params),
        converged=res <= tol_res * (1.0 + abs(e_total)),
        restarts=restarts_used,
        plus_class=classify(plus, params, tol_manifold),
        minus_class=classify(minus, params, tol_manifold),
        crossing=cross,
        c2_split_lower=e_plus + e_minus,
        split_ok=e_total >= e_plus + e_minus - 1e-12 * max(1.0, abs(e_total)),
        ps_gap_bound=ps_gap_bound,
        ps_gap_ok=ps_gap_ok,
        cross_plus=form_a(u, plus, params) - seminorm_p(plus, params),
        cross_minus=form_a(u, minus.with_values(-minus.values), params)
        - seminorm_p(minus, params),
    )


def sup_scan_ab(
    w1: GridFunction,
    u_eps: GridFunction,
    params: Params,
    a_max: float = 2.0,
    b_max: float = 2.0,
    grid_counts: int = 24,
) -> SupScanResult:
    """Grid maximum of I(a * w1 - b * u_eps) with one local refinement.

    The coarse grids always contain a = 1 (when a_max allows) and b = 0,
    so the scan maximum dominates I(w1) by construction.
    """
    if grid_counts < 8:
        raise ParameterError(f"grid_counts must be >= 8, got {grid_counts}")
    if not (a_max > 0.0 and b_max > 0.0):
        raise ParameterError("a_max and b_max must be positive")
    special_a = [1.0] if a_max >= 1.0 else []
    a_vals = np.union1d(np.linspace(0.0, a_max, grid_counts), special_a)
    b_vals = np.union1d(np.linspace(-b_max, b_max, grid_counts), [0.0])

    def scan(avs, bvs):
        best = (-math.inf, 0.0, 0.0)
        for a in avs:
            for b in bvs:
                val = energy(w1.with_values(a * w1.values - b * u_eps.values), params).total
                if val > best[0]:
                    best = (val, float(a), float(b))
        return best

    coarse = scan(a_vals, b_vals)
    da = a_vals[1] - a_vals[0] if len(a_vals) > 1 else a_max
    db = b_vals[1] - b_vals[0] if len(b_vals) > 1 else b_max
    a_lo, a_hi = max(0.0, coarse[1] - da), min(a_max, coarse[1] + da)
    b_lo, b_hi = max(-b_max, coarse[2] - db), min(b_max, coarse[2] + db)
    fine = scan(np.linspace(a_lo, a_hi, grid_counts), np.linspace(b_lo, b_hi, grid_counts))
    best = max(coarse, fine)
    return SupScanResult(best[0], best[1], best[2], coarse[0])
