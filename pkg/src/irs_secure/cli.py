"""Command-line front end: ``sweep``, ``converge`` and ``oracle-check``."""

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ScenarioConfig, derive_seed, generate_channels, make_rng
from .config import ConfigError, load_config
from .experiments import convergence_experiment, run_sweep
from .phase_opt import (build_quadratic, grid_oracle, mm_solve, om_solve, quadratic_objective,
                        random_phases)

CSV_HEADER = ["variable", "value", "algorithm", "mean_secrecy_rate_bps", "stderr",
              "feasible_frac", "mean_iters", "trials", "seed"]
EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_ORACLE = 0, 2, 3, 4
ORACLE_RATIO = 0.99


def fmt(x):
    """Fixed notation, 10 significant digits."""
    return np.format_float_positional(float(x), precision=10, unique=False,
                                      fractional=False, trim="-")


def _write_text(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def write_manifest(out_dir, run_cfg, outputs):
    resolved = out_dir / "resolved_config.json"
    _write_text(resolved, run_cfg.to_json())
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    manifest = {
        "config_digest": hashlib.sha256(resolved.read_bytes()).hexdigest(),
        "master_seed": run_cfg.seed,
        "version": __version__,
        # wall-clock time would break byte-identical reruns
        "timestamp": int(epoch) if epoch else None,
        "outputs": sorted([resolved.name, "manifest.json", *outputs]),
    }
    _write_text(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_sweep_csv(path, result):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in result.rows:
            w.writerow([r.variable, fmt(r.value), r.algorithm, fmt(r.mean_secrecy_rate),
                        fmt(r.stderr), fmt(r.feasible_frac), fmt(r.mean_iters), r.trials, r.seed])


def trace_payload(trace, L):
    points = []
    for i, obj in enumerate(trace.objective):
        p = {"iteration": i, "objective": obj}
        if trace.grad_norm:
            p["grad_norm"] = trace.grad_norm[i]
        points.append(p)
    return {
        "algorithm": trace.algorithm,
        "L": L,
        "iterations": trace.iterations,
        "converged": trace.converged,
        "status": trace.status,
        "trace": points,
    }


def _resolve(args):
    overrides = list(args.set or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(f"seed={args.seed}")
    if getattr(args, "trials", None) is not None:
        overrides.append(f"trials={args.trials}")
    if getattr(args, "algorithms", None):
        overrides.append(f"algorithms={args.algorithms}")
    return load_config(args.config, overrides)


def cmd_sweep(args):
    run_cfg = _resolve(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_sweep(run_cfg.sweep_spec(), workers=args.workers)
    write_sweep_csv(out / "sweep.csv", result)
    write_manifest(out, run_cfg, ["sweep.csv"])
    for r in result.rows:
        print(f"{r.variable}={fmt(r.value):>6} {r.algorithm:>7}  C_s={r.mean_secrecy_rate:.4f}"
              f" +- {r.stderr:.4f}  feasible={r.feasible_frac:.2f}  iters={r.mean_iters:.1f}")
    if result.failure_rate > 0.5:
        print(f"solver failure rate {result.failure_rate:.2f} exceeds 0.5", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_converge(args):
    run_cfg = _resolve(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle = convergence_experiment(run_cfg.scenario, run_cfg.l_values, run_cfg.seed)
    names = []
    for (alg, L), trace in sorted(bundle.items()):
        name = f"trace_{alg}_{L}.json"
        _write_text(out / name, json.dumps(trace_payload(trace, L), indent=1) + "\n")
        names.append(name)
        print(f"{alg.upper()} L={L}: {trace.iterations} iterations, {trace.status},"
              f" g={trace.objective[-1]:.6e}")
    write_manifest(out, run_cfg, names)
    failed = sum(t.failed for t in bundle.values())
    if failed > 0.5 * len(bundle):
        return EXIT_SOLVER
    return EXIT_OK


def oracle_ratios(L, instances, seed, resolution=512):
    """Worst-case ``g_solver / g_grid`` for OM and MM over random instances."""
    base = ScenarioConfig(n_irs=L)
    ratios = {"om": [], "mm": []}
    for k in range(instances):
        s = derive_seed(seed, L, k)
        qf = build_quadratic(generate_channels(base, s))
        _, g_grid = grid_oracle(qf, resolution)
        q0 = random_phases(make_rng(s, stream=1), L)
        q_om, _ = om_solve(qf, q0, tol=base.tol_om, max_iter=base.max_iter,
                           rng=make_rng(s, stream=2))
        q_mm, _ = mm_solve(qf, q0, tol=base.tol_mm, max_iter=base.max_iter)
        ratios["om"].append(quadratic_objective(qf, q_om) / g_grid)
        ratios["mm"].append(quadratic_objective(qf, q_mm) / g_grid)
    return {k: np.array(v) for k, v in ratios.items()}


def cmd_oracle_check(args):
    if not 1 <= args.L <= 3:
        print(f"oracle check needs 1 <= L <= 3, got {args.L}", file=sys.stderr)
        return EXIT_CONFIG
    ratios = oracle_ratios(args.L, args.instances, args.seed, args.resolution)
    worst = min(float(v.min()) for v in ratios.values())
    for alg, v in ratios.items():
        print(f"{alg.upper()}: worst ratio {v.min():.6f}, median {np.median(v):.6f}")
    print(f"worst-case ratio solver/oracle: {worst:.6f}")
    return EXIT_OK if worst >= ORACLE_RATIO else EXIT_ORACLE


def build_parser():
    p = argparse.ArgumentParser(prog="irs-secure", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials=True):
        sp.add_argument("--config", type=Path, default=None)
        sp.add_argument("--out", default="results")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", default=[])
        if trials:
            sp.add_argument("--trials", type=int, default=None)
            sp.add_argument("--algorithms", default=None, help="comma-separated list")
            sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("sweep", help="secrecy rate vs QoS target or IRS size")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("converge", help="per-iteration objective traces of OM and MM")
    common(sp, trials=False)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("oracle-check", help="compare solvers to exhaustive grid search")
    sp.add_argument("--L", type=int, default=2)
    sp.add_argument("--instances", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--resolution", type=int, default=512)
    sp.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
