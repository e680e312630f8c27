"""Critical-point location and classification.

Classification is by the sign pattern of Hessian eigenvalues under a
relative zero tolerance tau: an eigenvalue counts as zero when
|lambda| <= tau * max(1, |lambda|_max). Strata record the sign of the
smallest eigenvalue; the classification refines that into minimum,
strict saddle, maximum, or non-strict/degenerate.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .linalg import as_vector, sym_eigen

logger = logging.getLogger(__name__)

# sign of the smallest Hessian eigenvalue
STRATUM_POSITIVE = "min_eig_positive"
STRATUM_ZERO = "min_eig_zero"
STRATUM_NEGATIVE = "min_eig_negative"

LOCAL_MIN = "local_min"
STRICT_SADDLE = "strict_saddle"
NON_STRICT_OR_DEGENERATE = "non_strict_or_degenerate"
LOCAL_MAX = "local_max"

DEFAULT_ZERO_TAU = 1e-6


@dataclass
class CriticalPointReport:
    location: np.ndarray
    grad_norm: float
    eigenvalues: np.ndarray  # ascending
    stratum: str
    classification: str

    def to_dict(self):
        return {
            "location": [float(v) for v in self.location],
            "grad_norm": float(self.grad_norm),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "stratum": self.stratum,
            "classification": self.classification,
        }


def classify_eigenvalues(eigenvalues, tau=DEFAULT_ZERO_TAU):
    """Map an ascending eigenvalue list to (stratum, classification)."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    zero = tau * max(1.0, float(np.max(np.abs(eigenvalues))))
    lo = float(eigenvalues[0])
    hi = float(eigenvalues[-1])
    if lo > zero:
        stratum = STRATUM_POSITIVE
    elif lo < -zero:
        stratum = STRATUM_NEGATIVE
    else:
        stratum = STRATUM_ZERO

    if lo > zero:
        classification = LOCAL_MIN
    elif hi < -zero:
        classification = LOCAL_MAX
    elif lo < -zero and hi > zero:
        classification = STRICT_SADDLE
    else:
        classification = NON_STRICT_OR_DEGENERATE
    return stratum, classification


def classify_point(f, x, tau=DEFAULT_ZERO_TAU):
    """Classify a point of an objective by its Hessian eigenvalues.

    The gradient norm is reported as-is; callers decide whether the point is
    close enough to critical for the label to be meaningful.
    """
    x = as_vector(x)
    grad_norm = float(np.linalg.norm(f.gradient(x)))
    dec = sym_eigen(f.hessian(x))
    stratum, classification = classify_eigenvalues(dec.eigenvalues, tau)
    return CriticalPointReport(
        location=x.copy(),
        grad_norm=grad_norm,
        eigenvalues=dec.eigenvalues,
        stratum=stratum,
        classification=classification,
    )


def hessian_stratum(f, x, tau=DEFAULT_ZERO_TAU):
    """Stratum of a point: sign of the smallest Hessian eigenvalue."""
    dec = sym_eigen(f.hessian(as_vector(x)))
    stratum, _ = classify_eigenvalues(dec.eigenvalues, tau)
    return stratum


def newton_root(grad, hess, x0, tol=1e-8, max_steps=50, min_damping=2.0 ** -10):
    """Damped Newton iteration on grad(x) = 0 with Jacobian hess(x).

    The damping factor starts at 1 and halves until the gradient norm
    decreases; a step with no decrease at the minimum damping, a singular
    Newton system, or a non-finite step ends the iteration. Steps continue
    past `tol` until improvement stalls, so degenerate roots (where Newton
    converges only linearly) are polished as far as the budget allows rather
    than left at the tolerance boundary. Returns (x, converged) with
    converged = final gradient norm below tol.
    """
    x = as_vector(x0).copy()
    g = np.asarray(grad(x), dtype=float)
    gn = float(np.linalg.norm(g))
    if not np.isfinite(gn):
        return x, False
    for _ in range(max_steps):
        if gn == 0.0:
            return x, True
        try:
            d = np.linalg.solve(hess(x), -g)
        except np.linalg.LinAlgError:
            return x, gn < tol
        if not np.all(np.isfinite(d)):
            return x, gn < tol
        lam = 1.0
        improved = False
        while lam >= min_damping:
            x_new = x + lam * d
            with np.errstate(all="ignore"):
                g_new = np.asarray(grad(x_new), dtype=float)
                gn_new = float(np.linalg.norm(g_new))
            if np.isfinite(gn_new) and gn_new < gn:
                improved = True
                break
            lam *= 0.5
        if not improved:
            return x, gn < tol
        x, g, gn = x_new, g_new, gn_new
    return x, gn < tol


def _grid_seeds(box, grid_density):
    axes = [np.linspace(lo, hi, grid_density) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def solve_gradient_equation(f, rhs, seeds, tol=1e-8, max_steps=50, dedup_radius=1e-4, box=None):
    """Multistart damped Newton solve of grad f(x) = rhs.

    Returns deduplicated solutions (within `dedup_radius`), restricted to
    `box` when given, in deterministic lexicographic order.
    """
    rhs = as_vector(rhs)

    def shifted(x):
        return f.gradient(x) - rhs

    solutions = []
    skipped = 0
    for seed in np.atleast_2d(np.asarray(seeds, dtype=float)):
        x, ok = newton_root(shifted, f.hessian, seed, tol=tol, max_steps=max_steps)
        if not ok:
            skipped += 1
            continue
        if box is not None and not _in_box(x, box):
            continue
        if any(np.linalg.norm(x - s) <= dedup_radius for s in solutions):
            continue
        solutions.append(x)
    if skipped:
        logger.debug("solve_gradient_equation: %d seeds skipped (no convergence)", skipped)
    solutions.sort(key=tuple)
    return solutions


def _in_box(x, box, margin=1e-9):
    box = np.asarray(box, dtype=float)
    return bool(np.all(x >= box[:, 0] - margin) and np.all(x <= box[:, 1] + margin))


def find_critical_points(
    f,
    box=None,
    grid_density=10,
    tol=1e-8,
    dedup_radius=1e-4,
    tau=DEFAULT_ZERO_TAU,
    max_steps=50,
):
    """Locate and classify all critical points of `f` inside `box`.

    Damped Newton iteration on grad f = 0 is seeded from every node of a
    `grid_density`-per-axis grid; converged points with gradient norm below
    `tol` are deduplicated at `dedup_radius` and classified by Hessian
    eigenvalues. Seeds that hit a singular Newton system are skipped.
    """
    if box is None:
        box = f.domain_box
    box = np.asarray(box, dtype=float)
    seeds = _grid_seeds(box, grid_density)
    points = solve_gradient_equation(
        f, np.zeros(f.dim), seeds, tol=tol, max_steps=max_steps,
        dedup_radius=dedup_radius, box=box,
    )
    return [classify_point(f, x, tau) for x in points]
