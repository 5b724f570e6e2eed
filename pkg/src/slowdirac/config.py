"""Scenario configuration: flat ``key=value`` text with dotted section names.

Example::

    scenario=fig5b-noise30
    profile.kind=kink
    profile.theta=75
    noise.a=0.3
    noise.seed=1

Blank lines and ``#`` comments are ignored.  Resolution order is: built-in
defaults, then the catalog entry named by ``scenario``, then the keys given.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import CatalogError, ConfigParseError
from .model import NOISE_CELL, SPEED_OF_LIGHT

TASKS = ("spectrum", "evolve", "zero-mode", "mixing-sweep", "noise-sweep")
PROFILE_KINDS = ("kink", "sine", "constant", "none")
INITIAL_KINDS = ("gaussian", "zero-mode")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "custom"
    task: str = "spectrum"
    mode: str = "ideal"
    v0: float = 17.0
    length: float = 300.0
    c: float = SPEED_OF_LIGHT
    n_cells: int = 3000
    profile: str = "kink"
    theta: float = 75.0
    sharpness: float = 6.0
    k: float = 0.01
    noise_a: float = 0.0
    noise_seed: int = 1
    noise_cell: float = NOISE_CELL
    mixing_f: float = 0.0
    sweep_min: float = -2.0
    sweep_max: float = 2.0
    sweep_count: int = 801
    t_final: float = 10.0
    stride: int = 100
    initial: str = "gaussian"
    sigma: float = 1.2
    z0: float = 0.0
    n_seeds: int = 50
    mixing_sweep: tuple = ()
    noise_sweep: tuple = ()
    workers: int = 1
    out: str = "."

    @property
    def delta0(self):
        return self.theta * self.v0 / self.length

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


# dotted key -> (attribute, type)
KEYS = {
    "scenario": ("scenario", str),
    "task": ("task", str),
    "mode": ("mode", str),
    "scale.v0": ("v0", float),
    "scale.length": ("length", float),
    "scale.c": ("c", float),
    "grid.n_cells": ("n_cells", int),
    "profile.kind": ("profile", str),
    "profile.theta": ("theta", float),
    "profile.sharpness": ("sharpness", float),
    "profile.k": ("k", float),
    "noise.a": ("noise_a", float),
    "noise.seed": ("noise_seed", int),
    "noise.cell": ("noise_cell", float),
    "noise.sweep": ("noise_sweep", tuple),
    "mixing.f": ("mixing_f", float),
    "mixing.sweep": ("mixing_sweep", tuple),
    "sweep.min": ("sweep_min", float),
    "sweep.max": ("sweep_max", float),
    "sweep.count": ("sweep_count", int),
    "evolve.t_final": ("t_final", float),
    "evolve.stride": ("stride", int),
    "initial.kind": ("initial", str),
    "initial.sigma": ("sigma", float),
    "initial.z0": ("z0", float),
    "ensemble.n_seeds": ("n_seeds", int),
    "workers": ("workers", int),
    "output.dir": ("out", str),
}
_ATTR_TO_KEY = {attr: key for key, (attr, _) in KEYS.items()}

# natural units m = c = kappa = 1 on [-20, 20] for the wave-packet runs
_NATURAL = {"v0": 1.0, "length": 40.0, "c": 1.0, "n_cells": 4000, "theta": 40.0, "sharpness": 40.0}

CATALOG = {
    "fig3-trapped": dict(_NATURAL, task="evolve", profile="kink"),
    "fig3-free": dict(_NATURAL, task="evolve", profile="constant"),
    "fig4a-constant": dict(profile="constant"),
    "fig4b-kink": dict(profile="kink"),
    "fig5a-sine": dict(profile="sine"),
    "fig5b-noise30": dict(profile="kink", noise_a=0.3, noise_seed=1),
    "fig5c-dS20": dict(profile="kink", mode="generalized", mixing_f=0.2),
    "suppl1-dS-sweep": dict(
        task="mixing-sweep", profile="kink", mode="generalized", mixing_sweep=(0.1, 0.3, 0.4, 0.5)
    ),
    "suppl2-noise-sweep": dict(
        task="noise-sweep", profile="kink", noise_sweep=(0.05, 0.2, 0.4, 0.5), noise_seed=1
    ),
    "zeromode-profile": dict(task="zero-mode", profile="kink"),
}


def _convert(key, typ, raw):
    raw = raw.strip() if isinstance(raw, str) else raw
    try:
        if typ is str:
            return str(raw)
        if typ is int:
            if isinstance(raw, str):
                val = float(raw)
                if not val.is_integer():
                    raise ValueError
                return int(val)
            if float(raw) != int(raw):
                raise ValueError
            return int(raw)
        if typ is float:
            val = float(raw)
            if math.isnan(val):
                raise ValueError
            return val
        if typ is tuple:
            if isinstance(raw, str):
                items = [s for s in raw.split(",") if s.strip()]
            else:
                items = list(raw)
            return tuple(float(s) for s in items)
    except (TypeError, ValueError):
        raise ConfigParseError(key, f"expected {typ.__name__}, got {raw!r}") from None
    raise ConfigParseError(key, f"unsupported type {typ}")


def validate(cfg):
    """Raise ConfigParseError naming the first key that violates a constraint."""

    def fail(attr, msg):
        raise ConfigParseError(_ATTR_TO_KEY[attr], msg)

    if cfg.task not in TASKS:
        fail("task", f"must be one of {', '.join(TASKS)}")
    if cfg.mode not in ("ideal", "generalized"):
        fail("mode", "must be 'ideal' or 'generalized'")
    if cfg.profile not in PROFILE_KINDS:
        fail("profile", f"must be one of {', '.join(PROFILE_KINDS)}")
    if cfg.initial not in INITIAL_KINDS:
        fail("initial", f"must be one of {', '.join(INITIAL_KINDS)}")
    for attr in ("v0", "length", "c", "noise_cell", "sigma"):
        if not getattr(cfg, attr) > 0:
            fail(attr, "must be positive")
    for attr in ("n_cells", "sweep_count", "stride", "n_seeds", "workers"):
        if getattr(cfg, attr) < 1:
            fail(attr, "must be at least 1")
    if cfg.t_final < 0:
        fail("t_final", "must be nonnegative")
    if not 0 <= cfg.noise_a < 1:
        fail("noise_a", "a out of range [0, 1)")
    if any(not 0 <= a < 1 for a in cfg.noise_sweep):
        fail("noise_sweep", "a out of range [0, 1)")
    if not 0 <= cfg.noise_seed < 2**64:
        fail("noise_seed", "must be an unsigned 64-bit integer")
    if not abs(cfg.mixing_f) < 1:
        fail("mixing_f", "f out of range, need |f| < 1")
    if any(not abs(f) < 1 for f in cfg.mixing_sweep):
        fail("mixing_sweep", "f out of range, need |f| < 1")
    if cfg.mixing_f != 0 and cfg.mode != "generalized":
        fail("mixing_f", "a mixing-angle error needs mode=generalized")
    if not cfg.sweep_min < cfg.sweep_max and cfg.sweep_count > 1:
        fail("sweep_max", "must exceed sweep.min")
    return cfg


def resolve(scenario=None, overrides=None):
    """Defaults + catalog entry + overrides (attribute names or dotted keys)."""
    base = ScenarioConfig()
    values = {}
    if scenario is not None:
        if scenario not in CATALOG and scenario != "custom":
            raise CatalogError(f"unknown scenario {scenario!r}; known: {', '.join(CATALOG)}")
        values.update(CATALOG.get(scenario, {}))
        values["scenario"] = scenario
    for name, raw in (overrides or {}).items():
        if name in KEYS:
            attr, typ = KEYS[name]
            key = name
        elif name in _ATTR_TO_KEY:
            attr = name
            key = _ATTR_TO_KEY[name]
            typ = KEYS[key][1]
        else:
            raise ConfigParseError(name, "unknown key")
        values[attr] = _convert(key, typ, raw)
    return validate(base.replace(**values))


def parse_entries(text):
    """Raw ``{dotted key: string value}`` pairs from key/value text."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}", f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigParseError(key, "unknown key")
        if key in entries:
            raise ConfigParseError(key, "duplicate key")
        entries[key] = value
    return entries


def parse_config(text):
    """Parse key/value text into a fully resolved ScenarioConfig."""
    entries = parse_entries(text)
    scenario = entries.pop("scenario", None)
    return resolve(scenario, entries)


def _format(value):
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(cfg):
    """Inverse of parse_config: every key, one per line, floats in round-trip form."""
    lines = []
    for key, (attr, _) in KEYS.items():
        lines.append(f"{key}={_format(getattr(cfg, attr))}")
    return "\n".join(lines) + "\n"


def as_dict(cfg):
    """Resolved parameters keyed by their dotted names."""
    out = {}
    for key, (attr, _) in KEYS.items():
        val = getattr(cfg, attr)
        out[key] = list(val) if isinstance(val, tuple) else val
    return out
