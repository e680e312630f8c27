"""Predictor-corrector tracking of regularized critical points back to mu = 0.

Solutions of grad f(x) + mu * l = 0 form a smooth curve through the starting
critical point of the fully regularized objective (mu = 1). Tracing mu down
to 0 identifies the unregularized ancestor: differentiating the defining
equation gives the tangent dx/dmu = -hess f(x)^{-1} l for the predictor,
and damped Newton on the shifted gradient corrects each step. A singular
Hessian along the way, or a corrector that stops converging, is the
signature of a fold (a saddle-node pair annihilating): the partial path is
returned with the fold flag set.
"""

from dataclasses import dataclass, field

import numpy as np

from .critical import newton_root
from .linalg import as_vector


@dataclass
class ContinuationPath:
    """Samples of (mu, x, ||grad f(x)||) with mu strictly decreasing from 1."""

    samples: list = field(default_factory=list)
    fold: bool = False

    @property
    def mus(self):
        return np.array([s[0] for s in self.samples])

    @property
    def points(self):
        return np.array([s[1] for s in self.samples])

    @property
    def grad_norms(self):
        return np.array([s[2] for s in self.samples])


def continuation_trace(
    f,
    x_at_mu1,
    l,
    steps=100,
    tol=1e-9,
    start_slack=1e-6,
    det_tol=1e-10,
    max_newton=60,
):
    """Trace the critical-point curve of f + mu * l^T x from mu = 1 to mu = 0.

    The start must already satisfy ||grad f(x) + l|| <= start_slack; it is
    then polished to `tol` and must have a nonsingular Hessian. Stops early
    with fold=True when |det hess| < det_tol * max(1, ||hess||_F)^n at the
    current point or the corrector fails.
    """
    x = as_vector(x_at_mu1).copy()
    l = as_vector(l)
    if l.size != f.dim:
        raise ValueError("regularizer dimension mismatch")
    if steps < 1:
        raise ValueError("steps must be at least 1")

    def residual(y, mu):
        return np.asarray(f.gradient(y), dtype=float) + mu * l

    start_residual = float(np.linalg.norm(residual(x, 1.0)))
    if start_residual > start_slack:
        raise ValueError(
            f"start point is not a critical point of the regularized objective "
            f"(residual {start_residual:.3g} > {start_slack:.3g})"
        )
    # polish the starting point at mu = 1
    x, ok = newton_root(lambda y: residual(y, 1.0), f.hessian, x, tol=tol, max_steps=max_newton)
    if not ok:
        raise ValueError("start point could not be polished to a regularized critical point")

    def singular(h):
        scale = max(1.0, float(np.linalg.norm(h)))
        return abs(float(np.linalg.det(h))) < det_tol * scale ** f.dim

    h = np.asarray(f.hessian(x), dtype=float)
    if singular(h):
        raise ValueError("Hessian is singular at the start point")

    path = ContinuationPath()
    path.samples.append((1.0, x.copy(), float(np.linalg.norm(f.gradient(x)))))

    mus = np.linspace(1.0, 0.0, steps + 1)[1:]
    mu_prev = 1.0
    for mu in mus:
        h = np.asarray(f.hessian(x), dtype=float)
        if singular(h):
            path.fold = True
            break
        tangent = np.linalg.solve(h, -l)
        x_pred = x + (mu - mu_prev) * tangent
        x_new, ok = newton_root(
            lambda y, _mu=mu: residual(y, _mu), f.hessian, x_pred, tol=tol, max_steps=max_newton
        )
        if not ok:
            path.fold = True
            break
        x = x_new
        path.samples.append((float(mu), x.copy(), float(np.linalg.norm(f.gradient(x)))))
        mu_prev = mu
    return path
