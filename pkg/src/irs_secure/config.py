"""Flat ``key = value`` config files.

One assignment per line, ``#`` starts a comment. Keys are the
``ScenarioConfig`` field names plus the run keys below; anything else is an
error. Lists are comma separated.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields

from .channel import ALGORITHMS, ScenarioConfig
from .experiments import SweepSpec

RUN_KEYS = {
    "variable": "qos_db",
    "values": (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
    "trials": 100,
    "algorithms": ALGORITHMS,
    "seed": 0,
    "l_values": (20, 50),
}
_SCENARIO_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    variable: str = RUN_KEYS["variable"]
    values: tuple = RUN_KEYS["values"]
    trials: int = RUN_KEYS["trials"]
    algorithms: tuple = RUN_KEYS["algorithms"]
    seed: int = RUN_KEYS["seed"]
    l_values: tuple = RUN_KEYS["l_values"]

    def sweep_spec(self):
        return SweepSpec(variable=self.variable, values=self.values, trials=self.trials,
                         base=self.scenario, algorithms=self.algorithms,
                         master_seed=self.seed)

    def to_dict(self):
        d = asdict(self.scenario)
        d.update(variable=self.variable, values=list(self.values), trials=self.trials,
                 algorithms=list(self.algorithms), seed=self.seed,
                 l_values=list(self.l_values))
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def digest(self):
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def _number(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _convert(key, text):
    text = text.strip()
    if key in ("variable",):
        return text
    if key == "algorithms":
        return tuple(a.strip() for a in text.split(",") if a.strip())
    if key == "values":
        return tuple(_number(v) for v in text.split(",") if v.strip())
    if key == "l_values":
        return tuple(int(v) for v in text.split(",") if v.strip())
    if key in ("trials", "seed"):
        return int(text)
    kind = _SCENARIO_TYPES[key]
    if kind in (int, "int"):
        v = _number(text)
        if int(v) != v:
            raise ValueError(f"expected an integer, got {text!r}")
        return int(v)
    if kind in (float, "float"):
        return float(text)
    return text


def parse_assignments(lines, source="<config>"):
    """Parse ``key = value`` lines into a dict of converted values."""
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _SCENARIO_TYPES and key not in RUN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _convert(key, value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    return out


def build_run_config(assignments, source="<config>"):
    scenario = {k: v for k, v in assignments.items() if k in _SCENARIO_TYPES}
    run = {k: v for k, v in assignments.items() if k in RUN_KEYS}
    try:
        cfg = RunConfig(scenario=ScenarioConfig(**scenario), **run)
        cfg.sweep_spec()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return cfg


def load_config(path=None, overrides=()):
    """Read a config file (or defaults) and apply ``KEY=VALUE`` overrides.

    Overriding the sweep variable itself collapses the sweep to that value.
    """
    assignments = {}
    if path is not None:
        with open(path) as fh:
            assignments.update(parse_assignments(fh, source=str(path)))
    extra = parse_assignments(overrides, source="--set")
    assignments.update(extra)
    variable = assignments.get("variable", RUN_KEYS["variable"])
    if variable in extra and "values" not in extra:
        assignments["values"] = (extra[variable],)
    return build_run_config(assignments, source=str(path or "<defaults>"))
