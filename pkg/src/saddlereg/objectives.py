"""Objective functions with analytic derivatives, and the annotated test corpus.

Every corpus entry carries analytic gradient and Hessian, a recommended
domain box, a grid-estimated Lipschitz hint for the gradient, and ground
truth annotations of its critical points. Corpus value and gradient
callables are vectorized over leading axes: they accept a single point of
shape (n,) or a batch of shape (m, n).
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .critical import LOCAL_MIN, NON_STRICT_OR_DEGENERATE
from .linalg import as_vector, fd_gradient, fd_hessian, spectral_norm


@dataclass
class Objective:
    """A C^2 scalar field with evaluators for value, gradient, and Hessian.

    value/gradient map (..., dim) -> (...)/(..., dim) when `vectorized`,
    otherwise a single (dim,) point. hessian always maps a single point to a
    symmetric (dim, dim) array. Objectives are immutable after construction
    and their evaluators must be pure.
    """

    name: str
    dim: int
    value: callable
    gradient: callable
    hessian: callable
    domain_box: np.ndarray  # (dim, 2) rows of [lo, hi]
    lipschitz_hint: float | None = None
    vectorized: bool = False


@dataclass
class CorpusEntry:
    objective: Objective
    known_critical_points: list = field(default_factory=list)  # (location, classification)
    notes: str = ""


def make_objective(
    name,
    dim,
    value,
    gradient=None,
    hessian=None,
    domain_box=None,
    lipschitz_hint=None,
    vectorized=False,
):
    """Build an Objective, falling back to finite differences for missing derivatives."""
    if gradient is None:
        gradient = lambda x: fd_gradient(value, x)
    if hessian is None:
        hessian = lambda x: fd_hessian(value, x)
    if domain_box is None:
        domain_box = np.repeat([[-3.0, 3.0]], dim, axis=0)
    domain_box = np.asarray(domain_box, dtype=float).reshape(dim, 2)
    return Objective(
        name=name,
        dim=dim,
        value=value,
        gradient=gradient,
        hessian=hessian,
        domain_box=domain_box,
        lipschitz_hint=lipschitz_hint,
        vectorized=vectorized,
    )


def make_regularized(f, l):
    """Add the linear term l^T x to an objective.

    The gradient shifts by exactly l and the Hessian callable is the very
    same object as f's: linear terms do not change curvature.
    """
    l = as_vector(l)
    if l.size != f.dim:
        raise ValueError(f"regularizer has dimension {l.size}, objective has {f.dim}")

    def value(x, _f=f.value, _l=l):
        x = np.asarray(x, dtype=float)
        return _f(x) + np.sum(x * _l, axis=-1)

    def gradient(x, _g=f.gradient, _l=l):
        return _g(x) + _l

    return Objective(
        name=f"{f.name}+linear",
        dim=f.dim,
        value=value,
        gradient=gradient,
        hessian=f.hessian,
        domain_box=f.domain_box,
        lipschitz_hint=f.lipschitz_hint,
        vectorized=f.vectorized,
    )


def _grid_lipschitz(hessian, box, pts_per_axis=41):
    """Max spectral norm of the Hessian over a grid on the box (offline estimate)."""
    box = np.asarray(box, dtype=float)
    n = box.shape[0]
    if n > 2:
        pts_per_axis = 5
    axes = [np.linspace(lo, hi, pts_per_axis) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    return max(spectral_norm(hessian(p)) for p in points)


def cubic_valley():
    """f(x, y) = x^3/3 + y^2/2, a non-strict saddle at the origin."""

    def value(x):
        x = np.asarray(x, dtype=float)
        u, v = x[..., 0], x[..., 1]
        return u * u * u / 3.0 + v * v / 2.0

    def gradient(x):
        x = np.asarray(x, dtype=float)
        u = x[..., 0]
        return np.stack([u * u, x[..., 1]], axis=-1)

    def hessian(x):
        return np.array([[2.0 * x[0], 0.0], [0.0, 1.0]])

    box = [[-3.0, 3.0], [-3.0, 3.0]]
    return make_objective(
        "cubic_valley", 2, value, gradient, hessian, box,
        lipschitz_hint=_grid_lipschitz(hessian, box), vectorized=True,
    )


def cubic_cone():
    """f(x, y) = x^3/3 + x y^2; df/dx = x^2 + y^2 >= 0 everywhere."""

    def value(x):
        x = np.asarray(x, dtype=float)
        u, v = x[..., 0], x[..., 1]
        return u * u * u / 3.0 + u * v * v

    def gradient(x):
        x = np.asarray(x, dtype=float)
        u, v = x[..., 0], x[..., 1]
        return np.stack([u * u + v * v, 2.0 * u * v], axis=-1)

    def hessian(x):
        return np.array([[2.0 * x[0], 2.0 * x[1]], [2.0 * x[1], 2.0 * x[0]]])

    box = [[-3.0, 3.0], [-3.0, 3.0]]
    return make_objective(
        "cubic_cone", 2, value, gradient, hessian, box,
        lipschitz_hint=_grid_lipschitz(hessian, box), vectorized=True,
    )


def monkey_line():
    """f(x, y) = x y^3 / 3, critical along the whole line y = 0."""

    def value(x):
        x = np.asarray(x, dtype=float)
        u, v = x[..., 0], x[..., 1]
        return u * (v * v * v) / 3.0

    def gradient(x):
        x = np.asarray(x, dtype=float)
        u, v = x[..., 0], x[..., 1]
        return np.stack([v * v * v / 3.0, u * (v * v)], axis=-1)

    def hessian(x):
        y2 = x[1] ** 2
        return np.array([[0.0, y2], [y2, 2.0 * x[0] * x[1]]])

    box = [[-3.0, 3.0], [-3.0, 3.0]]
    return make_objective(
        "monkey_line", 2, value, gradient, hessian, box,
        lipschitz_hint=_grid_lipschitz(hessian, box), vectorized=True,
    )


def double_degenerate():
    """f(x) = (x^2 - 1)^3: minimum at 0, non-strict saddles at +-1."""

    def value(x):
        x = np.asarray(x, dtype=float)
        t = x[..., 0] * x[..., 0] - 1.0
        return t * t * t

    def gradient(x):
        x = np.asarray(x, dtype=float)
        u = x[..., 0]
        t = u * u - 1.0
        return np.stack([6.0 * u * (t * t)], axis=-1)

    def hessian(x):
        return np.array([[6.0 * (x[0] ** 2 - 1.0) * (5.0 * x[0] ** 2 - 1.0)]])

    box = [[-2.0, 2.0]]
    return make_objective(
        "double_degenerate", 1, value, gradient, hessian, box,
        lipschitz_hint=_grid_lipschitz(hessian, box), vectorized=True,
    )


def quadratic_bowl(c=1.0, dim=2):
    """f(x) = (c/2) ||x||^2, strongly convex with PL constant exactly c."""
    if c <= 0:
        raise ValueError("curvature c must be positive")

    def value(x, _c=c):
        x = np.asarray(x, dtype=float)
        return 0.5 * _c * np.sum(x * x, axis=-1)

    def gradient(x, _c=c):
        return _c * np.asarray(x, dtype=float)

    def hessian(x, _c=c, _n=dim):
        return _c * np.eye(_n)

    box = np.repeat([[-3.0, 3.0]], dim, axis=0)
    return make_objective(
        "quadratic_bowl", dim, value, gradient, hessian, box,
        lipschitz_hint=float(c), vectorized=True,
    )


@lru_cache(maxsize=1)
def corpus():
    """The annotated test-function corpus. Treat entries as immutable."""
    entries = [
        CorpusEntry(
            objective=cubic_valley(),
            known_critical_points=[(np.array([0.0, 0.0]), NON_STRICT_OR_DEGENERATE)],
            notes="Hessian eigenvalues at the origin are (0, 1); the basin of the "
            "saddle under plain gradient descent is the halfspace x > 0.",
        ),
        CorpusEntry(
            objective=cubic_cone(),
            known_critical_points=[(np.array([0.0, 0.0]), NON_STRICT_OR_DEGENERATE)],
            notes="df/dx = x^2 + y^2 is non-negative everywhere, so the gradient "
            "image of any neighborhood of the origin sits in a half-space.",
        ),
        CorpusEntry(
            objective=monkey_line(),
            known_critical_points=[
                (np.array([0.0, 0.0]), NON_STRICT_OR_DEGENERATE),
                (np.array([1.0, 0.0]), NON_STRICT_OR_DEGENERATE),
                (np.array([-1.0, 0.0]), NON_STRICT_OR_DEGENERATE),
            ],
            notes="Defined as f(x, y) = x*y^3/3 with the whole line y = 0 critical; "
            "gradients are odd (grad f(-x, -y) = -grad f(x, y)), so any linear shift "
            "l = grad f(x0, y0) creates a critical point at (-x0, -y0), which has a "
            "negative Hessian eigenvalue whenever y0 != 0 (e.g. at (-1.5, -1)). "
            "Easily mislabeled as x^3/3 + x*y^2 (that surface is cubic_cone here); "
            "this corpus keeps the two distinct.",
        ),
        CorpusEntry(
            objective=double_degenerate(),
            known_critical_points=[
                (np.array([0.0]), LOCAL_MIN),
                (np.array([1.0]), NON_STRICT_OR_DEGENERATE),
                (np.array([-1.0]), NON_STRICT_OR_DEGENERATE),
            ],
            notes="Third derivative is +48 at x = 1 and -48 at x = -1, so every "
            "non-zero linear shift bifurcates one saddle into a false minimum plus "
            "a maximum and eliminates the other.",
        ),
        CorpusEntry(
            objective=quadratic_bowl(1.0, 2),
            known_critical_points=[(np.array([0.0, 0.0]), LOCAL_MIN)],
            notes="Satisfies the Polyak-Lojasiewicz inequality with constant c = 1; "
            "used as the oracle for the regularization error bound theta^2 / (2 c).",
        ),
    ]
    return entries


def corpus_names():
    return [entry.objective.name for entry in corpus()]


def get_objective(name):
    """Look up a corpus objective by name (as used by the command line)."""
    for entry in corpus():
        if entry.objective.name == name:
            return entry.objective
    raise ValueError(
        f"unknown objective {name!r}; available: {', '.join(corpus_names())}"
    )
