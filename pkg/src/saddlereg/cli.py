"""Command-line front end for running and analyzing descent experiments.

Subcommands: run, analyze, bifurcate, mlp-compare, stable-set, region.
All outputs are machine-readable (schema-validated JSON, RFC-4180 CSV) and
byte-identical for identical configs and seeds. Exit codes: 0 success,
1 configuration error, 2 numerical failure.
"""

import argparse
import csv
import json
import re
import sys
from pathlib import Path

import jsonschema
import numpy as np

from .continuation import continuation_trace
from .critical import find_critical_points
from .linalg import NumericalError
from .mlp import MlpSpec, make_blobs, init_params, mlp_objective
from .objectives import corpus_names, get_objective, make_regularized
from .optimizer import (
    STATUS_NUMERICAL_FAILURE,
    OptimizerConfig,
    run_plain_gd,
    run_regularized_gd,
)
from .region import check_assumption_separation, theta_region
from .sampling import milnor_sample, stable_set_fraction


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept vector/box values like "-2,2" without mistaking them for flags
        self._negative_number_matcher = re.compile(r"^-\d+[\d.,eE+-]*$")

    def error(self, message):
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# output schemas

_EVENT_SCHEMA = {
    "type": "object",
    "required": ["k_entry", "x_entry", "l", "k_exit"],
    "properties": {
        "k_entry": {"type": "integer"},
        "x_entry": {"type": "array", "items": {"type": "number"}},
        "l": {"type": "array", "items": {"type": "number"}},
        "k_exit": {"type": ["integer", "null"]},
    },
}

RUN_SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["objective", "status", "final_x", "final_value", "final_grad_norm",
                 "n_iters", "events", "config"],
    "properties": {
        "objective": {"type": "string"},
        "status": {"type": "string"},
        "final_x": {"type": "array", "items": {"type": "number"}},
        "final_value": {"type": "number"},
        "final_grad_norm": {"type": "number"},
        "n_iters": {"type": "integer"},
        "events": {"type": "array", "items": _EVENT_SCHEMA},
        "config": {"type": "object"},
    },
}

TRAJECTORY_SCHEMA = {
    "type": "object",
    "required": ["status", "final_x", "final_value", "stride", "ks", "iterates",
                 "grad_norms", "modes", "event_ids", "events"],
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["location", "grad_norm", "eigenvalues", "stratum", "classification"],
}

ANALYZE_SCHEMA = {
    "type": "object",
    "required": ["objective", "critical_points"],
    "properties": {"critical_points": {"type": "array", "items": REPORT_SCHEMA}},
}

MILNOR_SCHEMA = {
    "type": "object",
    "required": ["objective", "n_l", "l_scale", "fraction_degenerate"],
}

BIFURCATE_SCHEMA = {
    "type": "object",
    "required": ["objective", "sweeps"],
    "properties": {
        "sweeps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["l", "critical_points", "continuations"],
            },
        }
    },
}

STABLE_SET_SCHEMA = {
    "type": "object",
    "required": ["objective", "method", "fraction", "n_samples"],
}

REGION_SCHEMA = {
    "type": "object",
    "required": ["objective", "theta", "resolution", "n_inside", "n_boundary", "seed"],
}

MLP_SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["trials", "theta", "gamma", "max_iters", "triggered", "prefix_equal",
                 "final_loss_plain", "final_loss_reg", "fraction_triggered"],
}


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def write_json(path, obj, schema):
    obj = _jsonify(obj)
    jsonschema.validate(obj, schema)
    with open(path, "w", newline="") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# argument handling

def _parse_vector(text, dim=None, name="vector"):
    try:
        vec = np.array([float(v) for v in str(text).split(",")])
    except ValueError as exc:
        raise ConfigError(f"could not parse {name} {text!r}") from exc
    if dim is not None and vec.size != dim:
        raise ConfigError(f"{name} must have {dim} components, got {vec.size}")
    return vec


def _parse_box(text, dim):
    vals = _parse_vector(text, name="box")
    if vals.size == 2:
        box = np.tile(vals, (dim, 1))
    elif vals.size == 2 * dim:
        box = vals.reshape(dim, 2)
    else:
        raise ConfigError(f"box needs 2 or {2 * dim} numbers, got {vals.size}")
    if np.any(box[:, 0] >= box[:, 1]):
        raise ConfigError("box lower bounds must be below upper bounds")
    return box


def _optimizer_config(args):
    try:
        return OptimizerConfig(
            gamma=args.gamma,
            theta=args.theta if args.theta is not None else 0.0,
            eps_converge=args.eps if args.eps is not None else 1e-8,
            max_iters=args.max_iters if args.max_iters is not None else 10_000,
            escape_radius=args.escape_radius if getattr(args, "escape_radius", None) else 10.0,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _get_objective(args):
    name = args.objective
    if name is None:
        raise ConfigError("--objective is required")
    try:
        f = get_objective(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if getattr(args, "regularizer", None):
        f = make_regularized(f, _parse_vector(args.regularizer, f.dim, "regularizer"))
    return f


def _apply_config_file(args):
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"could not read config file: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    for key, value in data.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _outdir(args):
    out = Path(args.out if args.out else "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_run(args):
    f = _get_objective(args)
    if args.x0:
        x0 = _parse_vector(args.x0, f.dim, "x0")
    else:
        # deterministic default: two-thirds of the way to the box's upper corner
        box = np.asarray(f.domain_box, dtype=float)
        x0 = box[:, 0] + (box[:, 1] - box[:, 0]) * 5.0 / 6.0
    cfg = _optimizer_config(args)
    out = _outdir(args)

    rec = run_regularized_gd(f, x0, cfg)
    rec.save_json(out / "trajectory.json")
    rec.save_csv(out / "trajectory.csv")
    write_json(out / "events.json",
               {"events": [e.to_dict() for e in rec.events]},
               {"type": "object", "required": ["events"]})
    summary = {
        "objective": f.name,
        "status": rec.status,
        "final_x": rec.final_x,
        "final_value": rec.final_value,
        "final_grad_norm": rec.grad_norms[-1],
        "n_iters": rec.n_iters,
        "events": [e.to_dict() for e in rec.events],
        "config": {
            "gamma": cfg.gamma, "theta": cfg.theta, "eps_converge": cfg.eps_converge,
            "max_iters": cfg.max_iters, "escape_radius": cfg.escape_radius,
            "x0": x0,
        },
    }
    write_json(out / "summary.json", summary, RUN_SUMMARY_SCHEMA)
    print(f"run: {rec.status} after {rec.n_iters} iterations, "
          f"final value {rec.final_value:.6g}, {len(rec.events)} event(s)")
    for i, e in enumerate(rec.events):
        print(f"  event {i}: entry k={e.k_entry}, exit k={e.k_exit}")
    return 2 if rec.status == STATUS_NUMERICAL_FAILURE else 0


def cmd_analyze(args):
    f = _get_objective(args)
    box = _parse_box(args.box, f.dim) if args.box else f.domain_box
    resolution = args.resolution if args.resolution is not None else 200
    out = _outdir(args)

    reports = find_critical_points(f, box)
    write_json(out / "critical_points.json",
               {"objective": f.name, "critical_points": [r.to_dict() for r in reports]},
               ANALYZE_SCHEMA)
    print(f"analyze: {len(reports)} critical point(s)")
    for r in reports:
        loc = ", ".join(f"{v:.6g}" for v in r.location)
        print(f"  ({loc}): {r.classification}, eigenvalues "
              + ", ".join(f"{v:.6g}" for v in r.eigenvalues))

    if args.theta is not None:
        checks = check_assumption_separation(f, args.theta, box, resolution)
        write_json(out / "separation.json",
                   {"objective": f.name, "theta": args.theta,
                    "checks": [{"point": c["point"], "pass": c["pass"],
                                "violations": c["violations"]} for c in checks]},
                   {"type": "object", "required": ["checks"]})
        print(f"  separation check: {'pass' if all(c['pass'] for c in checks) else 'FAIL'}")

    if args.x0 is not None and args.theta is not None:
        seed_pt = _parse_vector(args.x0, f.dim, "x0")
        region = theta_region(f, seed_pt, args.theta, box, resolution)
        region.save_csv(out / "region.csv")
        write_json(out / "region.json", _region_summary(f, region, seed_pt), REGION_SCHEMA)
        print(f"  region: {int(region.inside.sum())} inside cells")

    if args.milnor is not None:
        frac = milnor_sample(f, box, n_l=args.milnor,
                             seed=args.seed if args.seed is not None else 0)
        write_json(out / "milnor.json",
                   {"objective": f.name, "n_l": args.milnor, "l_scale": 1.0,
                    "fraction_degenerate": frac},
                   MILNOR_SCHEMA)
        print(f"  degenerate fraction over {args.milnor} draws: {frac:.6g}")
    return 0


def cmd_bifurcate(args):
    name = args.objective if args.objective else "double_degenerate"
    try:
        f = get_objective(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    box = _parse_box(args.box, f.dim) if args.box else f.domain_box
    if args.regularizer:
        ls = [_parse_vector(t, f.dim, "regularizer") for t in args.regularizer]
    elif f.dim == 1:
        ls = [np.array([v]) for v in (0.01, -0.01, 0.001, -0.001, 0.0)]
    else:
        raise ConfigError("--regularizer is required for objectives of dimension > 1")
    out = _outdir(args)

    sweeps = []
    for l in ls:
        fl = make_regularized(f, l) if np.any(l) else f
        reports = find_critical_points(fl, box, grid_density=41 if f.dim == 1 else 12)
        continuations = []
        if np.any(l):
            for r in reports:
                path = continuation_trace(f, r.location, l)
                continuations.append({
                    "start": r.location,
                    "fold": path.fold,
                    "n_samples": len(path.samples),
                    "reached_mu0": bool(path.samples[-1][0] == 0.0),
                    "end_x": path.samples[-1][1],
                })
        sweeps.append({
            "l": l,
            "critical_points": [r.to_dict() for r in reports],
            "continuations": continuations,
        })
        print(f"l = {l.tolist()}: {len(reports)} critical point(s): "
              + ", ".join(f"{r.classification}@{np.round(r.location, 4).tolist()}"
                          for r in reports))
    write_json(out / "bifurcation.json",
               {"objective": f.name, "sweeps": sweeps}, BIFURCATE_SCHEMA)
    return 0


def cmd_stable_set(args):
    f = _get_objective(args)
    if args.x0 is None:
        raise ConfigError("--x0 (the target point) is required for stable-set")
    target = _parse_vector(args.x0, f.dim, "x0")
    box = _parse_box(args.box, f.dim) if args.box else f.domain_box
    n_samples = args.trials if args.trials is not None else 2000
    theta = args.theta if args.theta is not None else 0.0
    if args.gamma is None:
        raise ConfigError("--gamma is required for stable-set")
    cfg = _optimizer_config(args)
    method = "regularized" if theta > 0 else "plain"
    out = _outdir(args)

    frac = stable_set_fraction(
        f, target, box, n_samples=n_samples, cfg=cfg,
        seed=args.seed if args.seed is not None else 0, method=method,
    )
    write_json(out / "stable_set.json",
               {"objective": f.name, "method": method, "fraction": frac,
                "n_samples": n_samples, "target": target, "theta": theta},
               STABLE_SET_SCHEMA)
    print(f"stable-set: fraction {frac:.4f} of {n_samples} samples ({method})")
    return 0


def _region_summary(f, region, seed_pt):
    return {
        "objective": f.name,
        "theta": region.theta,
        "resolution": region.resolution,
        "box": region.box,
        "n_inside": int(region.inside.sum()),
        "n_boundary": int(region.boundary.sum()),
        "seed": seed_pt,
    }


def cmd_region(args):
    f = _get_objective(args)
    if args.x0 is None or args.theta is None:
        raise ConfigError("--x0 and --theta are required for region")
    seed_pt = _parse_vector(args.x0, f.dim, "x0")
    box = _parse_box(args.box, f.dim) if args.box else f.domain_box
    resolution = args.resolution if args.resolution is not None else 200
    out = _outdir(args)

    try:
        region = theta_region(f, seed_pt, args.theta, box, resolution)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    region.save_csv(out / "region.csv")
    write_json(out / "region.json", _region_summary(f, region, seed_pt), REGION_SCHEMA)
    print(f"region: {int(region.inside.sum())} inside cells, "
          f"{int(region.boundary.sum())} boundary cells")
    return 0


def cmd_mlp_compare(args):
    widths = [int(v) for v in (args.widths or "2,8,8,2").split(",")]
    spec = MlpSpec(tuple(widths))
    trials = args.trials if args.trials is not None else 20
    seed = args.seed if args.seed is not None else 0
    n_samples = args.samples if args.samples is not None else 100
    separation = args.separation if args.separation is not None else 1.0
    theta = args.theta if args.theta is not None else 0.04
    gamma = args.gamma if args.gamma is not None else 0.5
    max_iters = args.max_iters if args.max_iters is not None else 800
    out = _outdir(args)

    classes = widths[-1]
    data = make_blobs(n_samples // classes, classes, widths[0], separation, seed=seed)
    f = mlp_objective(spec, data)
    cfg = OptimizerConfig(gamma=gamma, theta=theta, eps_converge=1e-10,
                          max_iters=max_iters, escape_radius=1e6)

    child_seeds = np.random.SeedSequence(seed).spawn(trials)
    triggered, prefix_equal = [], []
    finals_plain, finals_reg = [], []
    for t in range(trials):
        params0 = init_params(spec, child_seeds[t])
        plain = run_plain_gd(f, params0, cfg)
        reg = run_regularized_gd(f, params0, cfg)
        trig = len(reg.events) > 0
        triggered.append(trig)
        prefix_equal.append(_prefix_equal(plain, reg, theta))
        finals_plain.append(plain.final_value)
        finals_reg.append(reg.final_value)
        _write_trial_csv(out / f"trial_{t:03d}.csv", f, plain, reg)

    trig_idx = [i for i, t in enumerate(triggered) if t]
    summary = {
        "trials": trials,
        "widths": widths,
        "theta": theta,
        "gamma": gamma,
        "max_iters": max_iters,
        "seed": seed,
        "triggered": triggered,
        "prefix_equal": prefix_equal,
        "final_loss_plain": finals_plain,
        "final_loss_reg": finals_reg,
        "fraction_triggered": len(trig_idx) / trials,
        "mean_final_plain": float(np.mean(finals_plain)),
        "mean_final_reg": float(np.mean(finals_reg)),
        "mean_final_plain_triggered":
            float(np.mean([finals_plain[i] for i in trig_idx])) if trig_idx else None,
        "mean_final_reg_triggered":
            float(np.mean([finals_reg[i] for i in trig_idx])) if trig_idx else None,
    }
    write_json(out / "mlp_summary.json", summary, MLP_SUMMARY_SCHEMA)
    print(f"mlp-compare: {len(trig_idx)}/{trials} trials triggered, "
          f"prefix equality {'holds' if all(prefix_equal) else 'VIOLATED'}")
    if trig_idx:
        print(f"  mean final loss (triggered trials): plain "
              f"{summary['mean_final_plain_triggered']:.6f}, "
              f"regularized {summary['mean_final_reg_triggered']:.6f}")
    return 0


def _prefix_equal(plain, reg, theta):
    """Bit-identical iterates up to and including the first one inside the region."""
    k_stop = None
    for k, gn in zip(plain.ks, plain.grad_norms):
        if gn <= theta:
            k_stop = k
            break
    if k_stop is None:
        k_stop = plain.ks[-1]
    for k, xp, xr in zip(plain.ks, plain.iterates, reg.iterates):
        if k > k_stop:
            break
        if not np.array_equal(xp, xr):
            return False
    return True


def _write_trial_csv(path, f, plain, reg):
    rows = max(len(plain.ks), len(reg.ks))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss_plain", "gnorm_plain", "loss_reg", "gnorm_reg"])
        for i in range(rows):
            row = [i]
            for rec in (plain, reg):
                if i < len(rec.ks):
                    row += [repr(float(f.value(rec.iterates[i]))),
                            repr(float(rec.grad_norms[i]))]
                else:
                    row += ["", ""]
            writer.writerow(row)


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="saddlereg",
                     description="Regularized gradient descent experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, objective=True):
        if objective:
            p.add_argument("--objective", help="corpus objective name: "
                           + ", ".join(corpus_names()))
        p.add_argument("--out", default=None, help="output directory (default: out)")
        p.add_argument("--config", default=None, help="JSON config file; flags override")

    p_run = sub.add_parser("run", help="run regularized gradient descent")
    common(p_run)
    p_run.add_argument("--x0", default=None)
    p_run.add_argument("--theta", type=float, default=None)
    p_run.add_argument("--gamma", type=float, default=None)
    p_run.add_argument("--eps", type=float, default=None)
    p_run.add_argument("--max-iters", type=int, default=None)
    p_run.add_argument("--escape-radius", type=float, default=None)
    p_run.set_defaults(func=cmd_run)

    p_an = sub.add_parser("analyze", help="locate and classify critical points")
    common(p_an)
    p_an.add_argument("--regularizer", default=None)
    p_an.add_argument("--box", default=None)
    p_an.add_argument("--resolution", type=int, default=None)
    p_an.add_argument("--theta", type=float, default=None)
    p_an.add_argument("--x0", default=None, help="seed point for a region export")
    p_an.add_argument("--milnor", type=int, default=None,
                      help="sample this many random regularizers for degeneracy")
    p_an.add_argument("--seed", type=int, default=None)
    p_an.set_defaults(func=cmd_analyze)

    p_bi = sub.add_parser("bifurcate", help="sweep regularizers and trace continuations")
    common(p_bi)
    p_bi.add_argument("--regularizer", action="append", default=None)
    p_bi.add_argument("--box", default=None)
    p_bi.set_defaults(func=cmd_bifurcate)

    p_ss = sub.add_parser("stable-set", help="measure a basin fraction by sampling")
    common(p_ss)
    p_ss.add_argument("--x0", default=None, help="target point")
    p_ss.add_argument("--box", default=None)
    p_ss.add_argument("--trials", type=int, default=None, help="number of samples")
    p_ss.add_argument("--theta", type=float, default=None)
    p_ss.add_argument("--gamma", type=float, default=None)
    p_ss.add_argument("--eps", type=float, default=None)
    p_ss.add_argument("--max-iters", type=int, default=None)
    p_ss.add_argument("--escape-radius", type=float, default=None)
    p_ss.add_argument("--seed", type=int, default=None)
    p_ss.set_defaults(func=cmd_stable_set)

    p_rg = sub.add_parser("region", help="export a small-gradient region grid")
    common(p_rg)
    p_rg.add_argument("--x0", default=None, help="seed point")
    p_rg.add_argument("--theta", type=float, default=None)
    p_rg.add_argument("--box", default=None)
    p_rg.add_argument("--resolution", type=int, default=None)
    p_rg.set_defaults(func=cmd_region)

    p_ml = sub.add_parser("mlp-compare",
                          help="plain vs regularized descent on a small network")
    common(p_ml, objective=False)
    p_ml.add_argument("--trials", type=int, default=None)
    p_ml.add_argument("--theta", type=float, default=None)
    p_ml.add_argument("--gamma", type=float, default=None)
    p_ml.add_argument("--max-iters", type=int, default=None)
    p_ml.add_argument("--seed", type=int, default=None)
    p_ml.add_argument("--widths", default=None, help="layer widths, e.g. 2,8,8,2")
    p_ml.add_argument("--samples", type=int, default=None)
    p_ml.add_argument("--separation", type=float, default=None)
    p_ml.set_defaults(func=cmd_mlp_compare)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config_file(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
