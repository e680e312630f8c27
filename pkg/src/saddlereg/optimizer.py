"""Plain and locally linearly regularized gradient descent with event logging.

The regularized run keeps the plain update x - gamma * grad f(x) while the
gradient norm exceeds theta. On the step where the norm first drops to
theta or below, the regularizer l is frozen to the gradient at that entry
point and the update becomes x - gamma * (grad f(x) + l) until the norm
exceeds theta again; each re-entry samples a fresh l. Both runs share one
engine, so their iterates are bit-identical up to and including the first
iterate inside the small-gradient region.
"""

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_vector, spectral_norm

STATUS_CONVERGED = "converged"
STATUS_DIVERGED = "diverged"
STATUS_MAX_ITERS = "max_iters"
STATUS_NUMERICAL_FAILURE = "numerical_failure"

MODE_PLAIN = "plain"
MODE_REGULARIZED = "regularized"


@dataclass
class OptimizerConfig:
    """Step size, small-gradient threshold, and termination settings.

    gamma=None selects the default rule 1 / (2 * Lhat) with Lhat the spectral
    norm of the Hessian at the start point, floored at 1e-3. theta=0 disables
    regularization entirely. escape_radius is measured from the center of the
    objective's domain box.
    """

    gamma: float | None = None
    theta: float = 0.0
    eps_converge: float = 1e-8
    max_iters: int = 10_000
    escape_radius: float = 10.0

    def __post_init__(self):
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        if self.eps_converge <= 0:
            raise ValueError("eps_converge must be positive")
        if self.theta > 0 and self.theta <= self.eps_converge:
            raise ValueError("theta must exceed eps_converge")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.escape_radius <= 0:
            raise ValueError("escape_radius must be positive")


@dataclass
class RegularizationEvent:
    """One excursion into the small-gradient region: l = grad f(x_entry) exactly."""

    k_entry: int
    x_entry: np.ndarray
    l: np.ndarray
    k_exit: int | None = None

    def to_dict(self):
        return {
            "k_entry": self.k_entry,
            "x_entry": [float(v) for v in self.x_entry],
            "l": [float(v) for v in self.l],
            "k_exit": self.k_exit,
        }


@dataclass
class TrajectoryRecord:
    """Stored iterates (every `stride`-th plus the final one) and run outcome."""

    ks: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    modes: list = field(default_factory=list)
    event_ids: list = field(default_factory=list)  # index into events, or None
    events: list = field(default_factory=list)
    status: str = STATUS_MAX_ITERS
    final_x: np.ndarray | None = None
    final_value: float = float("nan")
    stride: int = 1

    @property
    def n_iters(self):
        return self.ks[-1] if self.ks else 0

    def to_dict(self):
        return {
            "status": self.status,
            "final_x": [float(v) for v in self.final_x],
            "final_value": float(self.final_value),
            "stride": self.stride,
            "ks": list(self.ks),
            "iterates": [[float(v) for v in x] for x in self.iterates],
            "grad_norms": [float(g) for g in self.grad_norms],
            "modes": list(self.modes),
            "event_ids": list(self.event_ids),
            "events": [e.to_dict() for e in self.events],
        }

    def save_json(self, path):
        with open(path, "w", newline="") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def save_csv(self, path):
        dim = len(self.final_x)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k"] + [f"x{i}" for i in range(dim)] + ["grad_norm", "mode", "event_id"])
            for k, x, gn, mode, eid in zip(
                self.ks, self.iterates, self.grad_norms, self.modes, self.event_ids
            ):
                writer.writerow(
                    [k] + [repr(float(v)) for v in x]
                    + [repr(float(gn)), mode, "" if eid is None else eid]
                )


def resolve_gamma(f, x0, cfg):
    """Step size for a run: the user's value, or 1 / (2 * Lhat) at the start point.

    A user-supplied gamma at or above 1 / lipschitz_hint gets a warning but is
    used as given.
    """
    if cfg.gamma is not None:
        if f.lipschitz_hint is not None and cfg.gamma >= 1.0 / f.lipschitz_hint:
            warnings.warn(
                f"gamma={cfg.gamma} is not below 1/L={1.0 / f.lipschitz_hint:.4g} "
                f"for objective {f.name}; descent may not contract",
                stacklevel=2,
            )
        return float(cfg.gamma)
    lhat = max(spectral_norm(f.hessian(as_vector(x0))), 1e-3)
    return 1.0 / (2.0 * lhat)


def gd_step(f, x, gamma):
    """One plain gradient step x - gamma * grad f(x)."""
    x = as_vector(x)
    g = np.asarray(f.gradient(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise ValueError(f"non-finite gradient at {x}")
    return x - gamma * g


def reg_step(f, x, l, gamma):
    """One regularized step x - gamma * (grad f(x) + l)."""
    x = as_vector(x)
    l = as_vector(l)
    g = np.asarray(f.gradient(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise ValueError(f"non-finite gradient at {x}")
    return x - gamma * (g + l)


def _run(f, x0, cfg, regularize, record_stride):
    x = as_vector(x0).copy()
    if x.size != f.dim:
        raise ValueError(f"x0 has dimension {x.size}, objective has {f.dim}")
    gamma = resolve_gamma(f, x, cfg)
    center = np.mean(np.asarray(f.domain_box, dtype=float), axis=1)
    threshold_on = regularize and cfg.theta > 0

    rec = TrajectoryRecord(stride=record_stride)
    mode = MODE_PLAIN
    l = np.zeros(f.dim)
    last_stored = -1

    def store(k, xk, gn):
        nonlocal last_stored
        if k == last_stored:
            return
        rec.ks.append(k)
        rec.iterates.append(xk.copy())
        rec.grad_norms.append(float(gn))
        rec.modes.append(mode)
        rec.event_ids.append(len(rec.events) - 1 if mode == MODE_REGULARIZED else None)
        last_stored = k

    with np.errstate(all="ignore"):
        g = np.asarray(f.gradient(x), dtype=float)
    gn = float(np.linalg.norm(g))
    if not np.isfinite(gn):
        rec.status = STATUS_NUMERICAL_FAILURE
        store(0, x, gn)
        rec.final_x = x
        with np.errstate(all="ignore"):
            rec.final_value = float(f.value(x))
        return rec

    k = 0
    while True:
        if threshold_on:
            inside = gn <= cfg.theta
            if inside and mode == MODE_PLAIN:
                l = g.copy()
                rec.events.append(RegularizationEvent(k_entry=k, x_entry=x.copy(), l=l.copy()))
                mode = MODE_REGULARIZED
            elif not inside and mode == MODE_REGULARIZED:
                rec.events[-1].k_exit = k
                mode = MODE_PLAIN
                l = np.zeros(f.dim)

        if k % record_stride == 0:
            store(k, x, gn)

        active_norm = float(np.linalg.norm(g + l)) if mode == MODE_REGULARIZED else gn
        if active_norm < cfg.eps_converge:
            rec.status = STATUS_CONVERGED
            break
        if k >= cfg.max_iters:
            rec.status = STATUS_MAX_ITERS
            break

        step = g + l if mode == MODE_REGULARIZED else g
        x_prev, gn_prev = x, gn
        with np.errstate(all="ignore"):
            x = x - gamma * step
        k += 1

        if not np.all(np.isfinite(x)):
            # halt at the last finite iterate
            rec.status = STATUS_NUMERICAL_FAILURE
            x, gn, k = x_prev, gn_prev, k - 1
            break
        with np.errstate(all="ignore"):
            g = np.asarray(f.gradient(x), dtype=float)
            gn = float(np.linalg.norm(g))
        if float(np.linalg.norm(x - center)) > cfg.escape_radius:
            rec.status = STATUS_DIVERGED
            break
        if not np.isfinite(gn):
            rec.status = STATUS_NUMERICAL_FAILURE
            break

    store(k, x, gn)
    rec.final_x = x
    with np.errstate(all="ignore"):
        rec.final_value = float(f.value(x))
    return rec


def run_regularized_gd(f, x0, cfg=None, record_stride=1):
    """Gradient descent with locally sampled linear regularization.

    A start point already inside the small-gradient region counts as an entry
    at k = 0, so l = grad f(x0) immediately. Convergence tests the active
    map's gradient (||grad f + l|| while regularized), so runs may converge to
    a shifted minimum of the regularized objective.
    """
    cfg = cfg or OptimizerConfig()
    return _run(f, x0, cfg, regularize=True, record_stride=record_stride)


def run_plain_gd(f, x0, cfg=None, record_stride=1):
    """Plain gradient descent: the same engine with regularization disabled."""
    cfg = cfg or OptimizerConfig()
    return _run(f, x0, cfg, regularize=False, record_stride=record_stride)
