"""Objective traces of OM and MM at N_t = 5, gamma = 10 dB, for several IRS sizes.

Writes one ``trace_{alg}_{L}.json`` per run and prints an iteration summary
over ``--seeds`` channel draws.
"""

import argparse
import json
from pathlib import Path

import numpy as np

from irs_secure.channel import ScenarioConfig
from irs_secure.cli import trace_payload
from irs_secure.experiments import convergence_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--L", type=int, nargs="+", default=[20, 50])
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--out", default="results/convergence")
    args = p.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = ScenarioConfig(qos_db=10.0)
    iters = {}
    for seed in range(args.seeds):
        bundle = convergence_experiment(cfg, args.L, seed)
        for (alg, L), trace in bundle.items():
            iters.setdefault((alg, L), []).append(trace.iterations)
            if seed == 0:
                (out / f"trace_{alg}_{L}.json").write_text(
                    json.dumps(trace_payload(trace, L), indent=1) + "\n")
    for (alg, L), its in sorted(iters.items()):
        print(f"{alg.upper():>3} L={L:<4} iterations mean {np.mean(its):7.1f}"
              f"  median {np.median(its):6.1f}  max {max(its)}")


if __name__ == "__main__":
    main()
