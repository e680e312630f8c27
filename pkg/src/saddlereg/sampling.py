"""Monte Carlo analyses: basin measurement, degeneracy sampling, error bounds.

Batched descent runs all samples in lockstep with per-sample regularization
state, so basin fractions over thousands of starts stay cheap. Each row
evolves exactly as a sequential run would: the same update arithmetic is
applied elementwise and rows freeze at termination.
"""

import numpy as np

from .critical import (
    STRATUM_NEGATIVE,
    STRATUM_POSITIVE,
    classify_point,
    find_critical_points,
    newton_root,
    solve_gradient_equation,
)
from .linalg import NumericalError, as_vector
from .objectives import make_regularized
from .optimizer import (
    STATUS_CONVERGED,
    STATUS_DIVERGED,
    STATUS_MAX_ITERS,
    STATUS_NUMERICAL_FAILURE,
)


def _batch_gradient(f, X):
    if getattr(f, "vectorized", False):
        return np.asarray(f.gradient(X), dtype=float)
    return np.array([f.gradient(x) for x in X])


def run_gd_batch(f, x0_batch, cfg, regularize):
    """Run many descent trajectories in lockstep; returns per-row outcomes.

    Result dict keys: final (m, n), status (m,), entered (m,), closed (m,).
    `entered` marks rows whose run opened at least one regularization event,
    `closed` rows whose first event finished (the iterate left the
    small-gradient region again).
    """
    X = np.atleast_2d(np.asarray(x0_batch, dtype=float)).copy()
    m, n = X.shape
    if n != f.dim:
        raise ValueError("sample dimension mismatch")
    if cfg.gamma is None:
        raise ValueError("batched runs need an explicit gamma")
    gamma = float(cfg.gamma)
    theta_on = regularize and cfg.theta > 0
    center = np.mean(np.asarray(f.domain_box, dtype=float), axis=1)

    L = np.zeros_like(X)
    inside = np.zeros(m, dtype=bool)
    entered = np.zeros(m, dtype=bool)
    closed = np.zeros(m, dtype=bool)
    active = np.ones(m, dtype=bool)
    status = np.full(m, STATUS_MAX_ITERS, dtype=object)

    with np.errstate(all="ignore"):
        G = _batch_gradient(f, X)
    gn = np.linalg.norm(G, axis=1)
    bad = ~np.isfinite(gn)
    status[bad] = STATUS_NUMERICAL_FAILURE
    active &= ~bad

    for k in range(cfg.max_iters + 1):
        if not active.any():
            break
        if theta_on:
            now_inside = active & (gn <= cfg.theta)
            entering = now_inside & ~inside & active
            L[entering] = G[entering]
            entered |= entering
            exiting = inside & ~now_inside & active
            closed |= exiting & entered
            inside = np.where(active, now_inside, inside)

        act_norm = np.where(inside, np.linalg.norm(G + L, axis=1), gn)
        conv = active & (act_norm < cfg.eps_converge)
        status[conv] = STATUS_CONVERGED
        active &= ~conv
        if not active.any() or k == cfg.max_iters:
            break

        with np.errstate(all="ignore"):
            step = G + np.where(inside[:, None], L, 0.0)
            X[active] -= gamma * step[active]
            G[active] = _batch_gradient(f, X[active])
            gn[active] = np.linalg.norm(G[active], axis=1)
            dist = np.linalg.norm(X - center, axis=1)
        div = active & (dist > cfg.escape_radius)
        status[div] = STATUS_DIVERGED
        active &= ~div
        bad = active & (~np.isfinite(gn) | ~np.isfinite(X).all(axis=1))
        status[bad] = STATUS_NUMERICAL_FAILURE
        active &= ~bad

    return {"final": X, "status": status, "entered": entered, "closed": closed}


def sample_in_box(rng, box, n_samples, exclude=None, max_tries=1000):
    """Uniform samples over a box, rejecting points where `exclude` is true."""
    box = np.asarray(box, dtype=float)
    out = np.empty((n_samples, box.shape[0]))
    filled = 0
    for _ in range(max_tries):
        need = n_samples - filled
        if need == 0:
            break
        cand = rng.uniform(box[:, 0], box[:, 1], size=(need, box.shape[0]))
        if exclude is not None:
            cand = cand[~exclude(cand)]
        out[filled:filled + len(cand)] = cand
        filled += len(cand)
    if filled < n_samples:
        raise ValueError("exclusion rejected too many samples")
    return out


def sample_in_region(rng, region, n_samples, max_tries=1000):
    """Uniform samples over the inside cells of a region grid."""
    def outside(points):
        return np.array([not region.contains_point(p) for p in points])

    return sample_in_box(rng, region.box, n_samples, exclude=outside, max_tries=max_tries)


def stable_set_fraction(
    f,
    target,
    box=None,
    n_samples=2000,
    cfg=None,
    seed=0,
    method="plain",
    tol=1e-2,
    exclude=None,
):
    """Fraction of uniform starts whose descent ends within `tol` of the target.

    `target` is either a point or a callable mapping a batch of final points
    (m, n) to distances (m,), which lets callers measure convergence to a
    critical subspace. `method` selects plain descent or the regularized
    algorithm. `exclude` removes a sampling subset (e.g. a thin strip around
    a basin boundary).
    """
    if cfg is None:
        raise ValueError("stable_set_fraction needs an explicit OptimizerConfig")
    if box is None:
        box = f.domain_box
    rng = np.random.default_rng(seed)
    X0 = sample_in_box(rng, box, n_samples, exclude=exclude)
    out = run_gd_batch(f, X0, cfg, regularize=(method == "regularized"))
    final = out["final"]
    if callable(target):
        dist = np.asarray(target(final), dtype=float)
    else:
        dist = np.linalg.norm(final - as_vector(target), axis=1)
    with np.errstate(invalid="ignore"):
        hits = dist <= tol
    return float(np.count_nonzero(hits)) / n_samples


def escape_fraction(f, x0_batch, cfg):
    """Fraction of regularized runs whose first small-gradient excursion closes."""
    out = run_gd_batch(f, x0_batch, cfg, regularize=True)
    entered = out["entered"]
    if not entered.any():
        return 0.0
    return float(np.count_nonzero(out["closed"] & entered)) / int(np.count_nonzero(entered))


def _sphere_direction(rng, dim):
    while True:
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def milnor_sample(
    f,
    box=None,
    n_l=500,
    l_scale=1.0,
    seed=0,
    l_min=0.0,
    grid_density=7,
    tau=1e-6,
    tol=1e-8,
):
    """Fraction of random linear shifts whose critical points stay near-singular.

    Draws regularizers uniformly from the ball of radius `l_scale` (or the
    annulus [l_min, l_scale]), finds all critical points of the shifted
    objective in the box, and flags a draw when any of them has
    min |lambda| <= tau * max(1, |lambda|_max). Almost every draw should
    produce only non-singular Hessians, so the returned fraction is a
    statistical check that the shift restores strictness.
    """
    if n_l < 1:
        raise ValueError("n_l must be at least 1")
    if box is None:
        box = f.domain_box
    rng = np.random.default_rng(seed)
    n = f.dim
    degenerate = 0
    for _ in range(n_l):
        u = rng.uniform(0.0, 1.0)
        radius = (l_min ** n + u * (l_scale ** n - l_min ** n)) ** (1.0 / n)
        l = radius * _sphere_direction(rng, n)
        reports = find_critical_points(
            make_regularized(f, l), box, grid_density=grid_density, tol=tol, tau=tau
        )
        for rep in reports:
            eig = np.abs(rep.eigenvalues)
            if eig.min() <= tau * max(1.0, eig.max()):
                degenerate += 1
                break
    return degenerate / n_l


def pl_error_check(f, xstar, theta, c, n_l=200, seed=0, tol=1e-10):
    """Largest value increase of the shifted minimizer over `n_l` regularizers.

    Draws regularizers with norm at most theta (every other draw sits exactly
    on the sphere of radius theta so the bound's supremum is probed), Newton
    solves grad f(x) + l = 0 from `xstar`, and returns the maximum of
    f(x_l) - f(xstar). When f satisfies the Polyak-Lojasiewicz inequality
    with constant c on the region, the result is bounded by theta^2 / (2 c).
    """
    xstar = as_vector(xstar)
    base = classify_point(f, xstar)
    if base.classification != "local_min":
        raise ValueError("xstar must be a local minimum")
    rng = np.random.default_rng(seed)
    f_star = float(f.value(xstar))
    max_excess = 0.0
    for i in range(n_l):
        radius = theta if i % 2 == 0 else rng.uniform(0.0, theta)
        l = radius * _sphere_direction(rng, f.dim)
        x_l, ok = newton_root(
            lambda y, _l=l: f.gradient(y) + _l, f.hessian, xstar, tol=tol
        )
        if not ok:
            raise NumericalError("Newton solve for the shifted minimizer failed")
        rep = classify_point(f, x_l)
        if rep.stratum != STRATUM_POSITIVE:
            raise NumericalError("shifted critical point left the positive-definite stratum")
        max_excess = max(max_excess, float(f.value(x_l)) - f_star)
    return max_excess


def psi_witness_check(f, region, x0, tau=1e-6, tol=1e-9, max_seeds=200):
    """Search the region for a point where grad f = -grad f(x0) outside the
    strictly indefinite stratum.

    Such a point witnesses that choosing the regularizer l = grad f(x0) would
    plant a minimum or degenerate critical point of the shifted objective
    inside the region (a false minimum the descent could fall into). Returns
    the witness's report, or None when every solution is a strict saddle or
    no solution exists.
    """
    x0 = as_vector(x0)
    if not region.contains_point(x0):
        raise ValueError("x0 must lie inside the region")
    l = np.asarray(f.gradient(x0), dtype=float)
    rhs = -l

    centers = region.inside_cell_centers()
    stride = max(1, len(centers) // max_seeds)
    seeds = centers[::stride]
    solutions = solve_gradient_equation(f, rhs, seeds, tol=tol, box=region.box)
    f_reg = make_regularized(f, l)
    for y in solutions:
        if not region.contains_point(y):
            continue
        rep = classify_point(f_reg, y, tau)
        if rep.stratum != STRATUM_NEGATIVE:
            return rep
    return None
