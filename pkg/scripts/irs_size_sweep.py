"""Mean secrecy rate against the number of IRS elements at a fixed QoS target."""

import argparse
from pathlib import Path

from irs_secure.channel import ScenarioConfig
from irs_secure.cli import write_sweep_csv
from irs_secure.experiments import SweepSpec, run_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--qos-db", type=float, default=10.0)
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30, 40, 50, 60])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results/irs_size_sweep.csv")
    args = p.parse_args()

    spec = SweepSpec(variable="n_irs", values=tuple(args.sizes), trials=args.trials,
                     base=ScenarioConfig(qos_db=args.qos_db), master_seed=args.seed)
    res = run_sweep(spec, workers=args.workers)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(args.out, res)
    print("L     " + " ".join(f"{a:>8}" for a in spec.algorithms))
    for v in spec.values:
        print(f"{v:<5} " + " ".join(f"{res.row(a, v).mean_secrecy_rate:8.3f}"
                                    for a in spec.algorithms))


if __name__ == "__main__":
    main()
