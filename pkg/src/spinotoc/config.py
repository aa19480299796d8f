"""Scenario configuration: a strict YAML key-value schema with per-scenario
defaults taken from the reference parameter sets.

Unknown keys are rejected so a typo never silently falls back to a default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import yaml


class ConfigError(ValueError):
    pass


SCENARIOS = (
    "fotoc-lmg-bath",
    "fotoc-corrected-lmg-bath",
    "compare-two-spin",
    "tfim-lightcone",
    "lmg-closed",
    "validate",
    "haar-check",
)

# allowed model keys and their defaults, per scenario family
_LMG_BATH_MODEL = {
    "n_system": 4,
    "n_bath": 5,
    "omega": 2.0,
    "j_coupling": 0.5,
    "lambda": 0.5,
    "lambda_tilde": None,
    "omega_c": 4.0,
    "temperature": 10.0,
}
_TWO_SPIN_MODEL = {**_LMG_BATH_MODEL, "n_system": 2, "n_bath": 10, "lambda": 1.0}
_TFIM_MODEL = {
    "n_system": 4,
    "n_bath": 6,
    "b_field": 0.5,
    "j_coupling": 0.5,
    "theta": pi / 2,
    "g": 0.5,
    "gamma": 1.0,
    "lambda_z": 1.0,
    "temperature": 10.0,
}
_LMG_CLOSED_MODEL = {
    "n_spins": 6,
    "lambda": 1.0,
    "gamma": 1.0,
    "omega_c": 0.5,
}

_MODEL_DEFAULTS = {
    "fotoc-lmg-bath": _LMG_BATH_MODEL,
    "fotoc-corrected-lmg-bath": _LMG_BATH_MODEL,
    "compare-two-spin": _TWO_SPIN_MODEL,
    "tfim-lightcone": _TFIM_MODEL,
    "lmg-closed": _LMG_CLOSED_MODEL,
}

# parameters that may be given as a list of variations in compare-two-spin
_SWEEPABLE = ("lambda", "omega_c", "temperature")

_OPERATOR_DEFAULTS = {"axis_a": "z", "axis_b": "z", "site_b": 0, "sites_a": "all"}
_TIME_DEFAULTS = {"t_max": 5.0, "steps": 200}

_TOP_KEYS = {
    "scenario",
    "seed",
    "fast_path",
    "output",
    "model",
    "operators",
    "time",
    "initial_state",
    "bath_state",
    "threshold",
    "samples",
    "dims",
}


@dataclass
class ScenarioConfig:
    scenario: str
    seed: int = 1234
    fast_path: bool = False
    output: str | None = None
    model: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    time: dict = field(default_factory=dict)
    initial_state: str = "product-tilted"
    bath_state: str = "thermal"
    threshold: float = 0.98  # light-cone onset level
    samples: int = 2000
    dims: tuple[int, ...] = (2, 4)

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "fast_path": self.fast_path,
            "output": self.output,
            "model": dict(self.model),
            "operators": dict(self.operators),
            "time": dict(self.time),
            "initial_state": self.initial_state,
            "bath_state": self.bath_state,
            "threshold": self.threshold,
            "samples": self.samples,
            "dims": list(self.dims),
        }


def _merge_section(name: str, given, defaults: dict, sweepable=()) -> dict:
    given = {} if given is None else dict(given)
    unknown = set(given) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown {name} key(s): {', '.join(sorted(unknown))}")
    merged = {**defaults, **given}
    for key, value in merged.items():
        if isinstance(value, list) and key not in sweepable:
            raise ConfigError(f"{name}.{key} does not accept a list")
    return merged


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a YAML scenario config, filling defaults."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    if "scenario" not in raw:
        raise ConfigError("missing required key: scenario")
    scenario = raw["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")

    cfg = ScenarioConfig(scenario=scenario)
    if "seed" in raw:
        cfg.seed = _require_int(raw["seed"], "seed")
    if "fast_path" in raw:
        if not isinstance(raw["fast_path"], bool):
            raise ConfigError("fast_path must be a boolean")
        cfg.fast_path = raw["fast_path"]
    if "output" in raw:
        cfg.output = str(raw["output"])
    if "threshold" in raw:
        cfg.threshold = _require_number(raw["threshold"], "threshold")
    if "samples" in raw:
        cfg.samples = _require_int(raw["samples"], "samples")
        if cfg.samples < 100:
            raise ConfigError("samples must be >= 100")
    if "dims" in raw:
        dims = raw["dims"]
        if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 2 for d in dims):
            raise ConfigError("dims must be a list of integers >= 2")
        cfg.dims = tuple(dims)

    if scenario in _MODEL_DEFAULTS:
        sweepable = _SWEEPABLE if scenario == "compare-two-spin" else ()
        cfg.model = _merge_section("model", raw.get("model"), _MODEL_DEFAULTS[scenario], sweepable)
        cfg.operators = _merge_section(
            "operators", raw.get("operators"), _OPERATOR_DEFAULTS, sweepable=("sites_a",)
        )
        cfg.time = _merge_section("time", raw.get("time"), _TIME_DEFAULTS)
        _validate_time(cfg.time)
        _validate_operators(cfg.operators, cfg.model, scenario)
        if "initial_state" in raw:
            cfg.initial_state = raw["initial_state"]
        elif scenario == "compare-two-spin":
            cfg.initial_state = "maximally-mixed"
        if cfg.initial_state not in ("product-tilted", "maximally-mixed"):
            raise ConfigError(f"unknown initial_state {cfg.initial_state!r}")
        if "bath_state" in raw:
            cfg.bath_state = raw["bath_state"]
        if cfg.bath_state not in ("thermal", "maximally-mixed"):
            raise ConfigError(f"unknown bath_state {cfg.bath_state!r}")
        if cfg.fast_path and scenario in ("tfim-lightcone", "lmg-closed"):
            raise ConfigError(f"fast_path applies only to LMG-bath scenarios, not {scenario}")
    else:
        for section in ("model", "operators", "time", "initial_state", "bath_state"):
            if section in raw:
                raise ConfigError(f"{section} is not accepted by scenario {scenario}")
    return cfg


def _require_int(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{name} must be an integer")
    return value


def _require_number(value, name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{name} must be a number")
    return float(value)


def _validate_time(time: dict) -> None:
    if not isinstance(time["steps"], int) or time["steps"] < 2:
        raise ConfigError("time.steps must be an integer >= 2 (steps >= 2)")
    if _require_number(time["t_max"], "time.t_max") <= 0:
        raise ConfigError("time.t_max must be > 0")


def _validate_operators(operators: dict, model: dict, scenario: str) -> None:
    for axis_key in ("axis_a", "axis_b"):
        if operators[axis_key] not in ("x", "y", "z"):
            raise ConfigError(f"operators.{axis_key} must be one of x, y, z")
    n_sys = model.get("n_spins", model.get("n_system"))
    site_b = operators["site_b"]
    if not isinstance(site_b, int) or not 0 <= site_b < n_sys:
        raise ConfigError(f"operators.site_b must be a site index in [0, {n_sys})")
    sites_a = operators["sites_a"]
    if sites_a == "all":
        return
    if not isinstance(sites_a, list) or not all(
        isinstance(s, int) and 0 <= s < n_sys for s in sites_a
    ):
        raise ConfigError(f"operators.sites_a must be 'all' or a list of site indices in [0, {n_sys})")
    if not sites_a:
        raise ConfigError("operators.sites_a must be nonempty")


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
