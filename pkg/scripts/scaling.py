"""Per-iteration wall time of OM and MM against L, with the fitted log-log slope."""

import argparse

import numpy as np

from irs_secure.channel import ScenarioConfig, generate_channels
from irs_secure.phase_opt import build_quadratic, mm_solve, om_solve, random_phases


def per_iteration(solve, qf, q0, repeats, **kw):
    times = []
    for _ in range(repeats):
        _, trace = solve(qf, q0, max_iter=30, **kw)
        times.append(trace.loop_time / max(trace.iterations, 1))
    return float(np.median(times))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    p.add_argument("--repeats", type=int, default=5)
    args = p.parse_args()

    rows = {"om": [], "mm": []}
    for L in args.sizes:
        qf = build_quadratic(generate_channels(ScenarioConfig(n_irs=L), seed=L))
        q0 = random_phases(np.random.default_rng(L), L)
        rows["om"].append(per_iteration(om_solve, qf, q0, args.repeats, tol=1e-300))
        rows["mm"].append(per_iteration(mm_solve, qf, q0, args.repeats, tol=0.0))
        print(f"L={L:<5} OM {rows['om'][-1] * 1e6:9.1f} us/iter   MM {rows['mm'][-1] * 1e6:9.1f} us/iter")
    logs = np.log(args.sizes)
    for alg, t in rows.items():
        print(f"{alg.upper()} log-log slope {np.polyfit(logs, np.log(t), 1)[0]:.2f}")


if __name__ == "__main__":
    main()
