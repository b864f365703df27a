"""Mean secrecy rate against the QoS target gamma for OM, MM, random phases and no IRS."""

import argparse
from pathlib import Path

from irs_secure.channel import ScenarioConfig
from irs_secure.cli import write_sweep_csv
from irs_secure.experiments import SweepSpec, run_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-irs", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results/qos_sweep.csv")
    args = p.parse_args()

    spec = SweepSpec(variable="qos_db", values=tuple(range(0, 31, 5)), trials=args.trials,
                     base=ScenarioConfig(n_irs=args.n_irs), master_seed=args.seed)
    res = run_sweep(spec, workers=args.workers)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(args.out, res)
    print("gamma_dB " + " ".join(f"{a:>16}" for a in spec.algorithms))
    for v in spec.values:
        cells = (f"{res.row(a, v).mean_secrecy_rate:7.3f} ({res.row(a, v).feasible_frac:4.2f})"
                 for a in spec.algorithms)
        print(f"{v:8g} " + " ".join(f"{c:>16}" for c in cells))


if __name__ == "__main__":
    main()
