"""Seeded Monte-Carlo harness for convergence traces and secrecy-rate sweeps."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ALGORITHMS, ScenarioConfig, derive_seed, generate_channels, make_rng
from .phase_opt import SolveTrace, build_quadratic, mm_solve, om_solve, random_phases
from .transmit import design_transmission

# Extension point: a full-CSI baseline would be added to ALGORITHMS and
# dispatched in ``solve_phases``.
SWEEP_VARIABLES = ("qos_db", "n_irs")


@dataclass(frozen=True)
class SweepSpec:
    variable: str = "qos_db"
    values: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials: int = 100
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    algorithms: tuple = ALGORITHMS
    master_seed: int = 0

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"variable must be one of {SWEEP_VARIABLES}")
        vals = tuple(self.values)
        if not vals:
            raise ValueError("values must be non-empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("values must be strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad or not self.algorithms:
            raise ValueError(f"unknown algorithms {bad}; choose from {ALGORITHMS}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "algorithms", tuple(self.algorithms))

    def config_at(self, value):
        if self.variable == "n_irs":
            return replace(self.base, n_irs=int(value))
        return replace(self.base, qos_db=float(value))


@dataclass(frozen=True)
class SweepRow:
    variable: str
    value: float
    algorithm: str
    mean_secrecy_rate: float
    stderr: float
    feasible_frac: float
    mean_secrecy_rate_feasible: float
    mean_iters: float
    mean_wall_time: float
    trials: int
    failures: int
    seed: int


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list

    def row(self, algorithm, value):
        for r in self.rows:
            if r.algorithm == algorithm and r.value == value:
                return r
        raise KeyError((algorithm, value))

    def curve(self, algorithm):
        return np.array([self.row(algorithm, v).mean_secrecy_rate for v in self.spec.values])

    @property
    def failure_rate(self):
        solved = [r for r in self.rows if r.algorithm in ("om", "mm")]
        total = sum(r.trials for r in solved)
        return sum(r.failures for r in solved) / total if total else 0.0


def initial_phases(cfg, seed):
    """Shared starting point of all solvers for trial ``seed``."""
    return random_phases(make_rng(seed, stream=1), cfg.n_irs)


def solve_phases(cs, cfg, algorithm, seed):
    """Phase vector for ``algorithm`` (``None`` when the IRS is absent)."""
    if algorithm == "no_irs":
        return None, SolveTrace("no_irs", converged=True, status="skipped")
    q0 = initial_phases(cfg, seed)
    if algorithm == "random":
        return q0, SolveTrace("random", converged=True, status="skipped")
    qf = build_quadratic(cs)
    if algorithm == "om":
        return om_solve(qf, q0, tol=cfg.tol_om, max_iter=cfg.max_iter, eta0=cfg.eta0,
                        cg_rule=cfg.cg_rule, rng=make_rng(seed, stream=2))
    if algorithm == "mm":
        return mm_solve(qf, q0, tol=cfg.tol_mm, max_iter=cfg.max_iter)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_trial(cfg, algorithm, seed):
    """One channel draw, phase solve and transmit design.

    Returns
    -------
    report : RateReport
    trace : SolveTrace
    """
    cs = generate_channels(cfg, seed)
    q, trace = solve_phases(cs, cfg, algorithm, seed)
    _, report = design_transmission(cs, q, cfg)
    return report, trace


def _trial_task(args):
    cfg, algorithm, seed = args
    report, trace = run_trial(cfg, algorithm, seed)
    return report.secrecy_rate, report.feasible, trace.iterations, trace.wall_time, trace.failed


def mean_and_stderr(x):
    """Two-pass mean and standard error of the mean (0 for a single sample)."""
    x = [float(v) for v in x]
    n = len(x)
    mean = math.fsum(x) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in x) / (n - 1)
    return mean, math.sqrt(var / n)


def run_sweep(spec, workers=1):
    """Mean secrecy rate per ``(algorithm, value)`` over paired trials.

    Trial ``t`` at value index ``v`` uses the sub-seed
    ``derive_seed(master_seed, v, t)`` for every algorithm, so all algorithms
    see the same channels and starting phases. Results do not depend on
    ``workers``.
    """
    tasks, keys = [], []
    for vi, value in enumerate(spec.values):
        cfg = spec.config_at(value)
        for t in range(spec.trials):
            seed = derive_seed(spec.master_seed, vi, t)
            for alg in spec.algorithms:
                tasks.append((cfg, alg, seed))
                keys.append((value, alg))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_trial_task, tasks, chunksize=8))
    else:
        outcomes = [_trial_task(t) for t in tasks]

    grouped = {}
    for key, out in zip(keys, outcomes):
        grouped.setdefault(key, []).append(out)

    rows = []
    for value in spec.values:
        for alg in spec.algorithms:
            outs = grouped[(value, alg)]
            rates = [o[0] for o in outs]
            feas = [o[1] for o in outs]
            ok = [o for o in outs if not o[4]]
            mean, se = mean_and_stderr(rates)
            feas_rates = [r for r, f in zip(rates, feas) if f]
            rows.append(SweepRow(
                variable=spec.variable,
                value=value,
                algorithm=alg,
                mean_secrecy_rate=mean,
                stderr=se,
                feasible_frac=sum(feas) / len(feas),
                mean_secrecy_rate_feasible=mean_and_stderr(feas_rates)[0] if feas_rates else 0.0,
                mean_iters=mean_and_stderr([o[2] for o in ok])[0] if ok else 0.0,
                mean_wall_time=mean_and_stderr([o[3] for o in outs])[0],
                trials=len(outs),
                failures=len(outs) - len(ok),
                seed=spec.master_seed,
            ))
    return SweepResult(spec, rows)


def convergence_experiment(cfg, l_values, seed):
    """OM and MM traces on one channel draw per IRS size, from a shared start.

    Returns
    -------
    dict
        ``{(algorithm, L): SolveTrace}``
    """
    bundle = {}
    for L in l_values:
        cfg_l = replace(cfg, n_irs=int(L))
        trial_seed = derive_seed(seed, int(L))
        cs = generate_channels(cfg_l, trial_seed)
        for alg in ("om", "mm"):
            _, trace = solve_phases(cs, cfg_l, alg, trial_seed)
            bundle[(alg, int(L))] = trace
    return bundle
