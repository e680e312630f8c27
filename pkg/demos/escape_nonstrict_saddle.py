"""Escape from non-strict saddle points that trap plain gradient descent.

Two classic surfaces:
  * cubic_cone  f(x,y) = x^3/3 + x y^2   - isolated non-strict saddle at the origin
  * monkey_line f(x,y) = x y^3 / 3       - a whole critical line y = 0

Plain descent converges to the degenerate critical set. The regularized run
samples l = grad f at the point where the gradient norm first drops below
theta, descends on f + l^T x while inside that small-gradient region, and
exits it in a handful of iterations.
"""

import numpy as np

from saddlereg import OptimizerConfig, get_objective, run_plain_gd, run_regularized_gd

CASES = [
    ("cubic_cone", np.array([1.5, 0.5]), 3.0),
    ("monkey_line", np.array([1.5, 1.0]), 4.7),
]

for name, x0, theta in CASES:
    f = get_objective(name)
    print(f"\n=== {name} from {x0.tolist()}, theta = {theta} ===")

    plain_cfg = OptimizerConfig(theta=0.0, eps_converge=1e-6, max_iters=20_000)
    plain = run_plain_gd(f, x0, plain_cfg)
    print(f"plain descent:       {plain.status} after {plain.n_iters} iterations, "
          f"final x = {np.round(plain.final_x, 4).tolist()}, "
          f"|grad| = {plain.grad_norms[-1]:.2e}")

    reg_cfg = OptimizerConfig(theta=theta, eps_converge=1e-8, max_iters=5000)
    reg = run_regularized_gd(f, x0, reg_cfg)
    ev = reg.events[0]
    print(f"regularized descent: {reg.status}, "
          f"l = grad f(x0) = {np.round(ev.l, 4).tolist()}")
    print(f"  entered the small-gradient region at k = {ev.k_entry}, "
          f"left it at k = {ev.k_exit}")
    print(f"  final x = {np.round(reg.final_x, 3).tolist()} "
          f"(far from the critical set: the saddle no longer attracts)")
