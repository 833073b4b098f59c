"""Scenario configuration: an INI-style ``key = value`` file.

Grammar (all sections optional, unknown keys are an error)::

    [scenario]
    name = fig4
    kind = add-thermal        ; subtract-squeezed | add-coherent | add-thermal | add-vacuum
    n_modes = 4
    r = 0.5                   ; squeezing of the principal mode
    phi = 0.0
    r2 = 0.0                  ; squeezing of a second mode (gives a 4D reduced state)
    phi2 = 0.0
    xi0 = (1+0j)              ; coherent amplitude in the principal mode
    tau = 5.0                 ; thermal mean photon number
    detector_overlap = 1.0    ; |<principal|M>|^2
    v_scale = 1.0             ; twin-beam kernel magnitude
    strength = 0.1            ; reflectivity / squeezing used for success probability
    lo_mode = detector        ; detector | principal
    seed = 0                  ; mode-embedding seed

    [grid]
    q = -4.0:4.0:161
    p = -4.0:4.0:161
    axis4 = -4.0:4.0:33       ; every axis of 4D grids
    full4d = false

    [output]
    dir = out
    format = csv              ; csv | pgm

    [sweep]
    tau = 0.0, 1.0, 5.0       ; comma-separated values per swept key
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError
from .reduction import DEFAULT_AXIS, Axis

KINDS = ("subtract-squeezed", "add-coherent", "add-thermal", "add-vacuum")
FORMATS = ("csv", "pgm")
LO_MODES = ("detector", "principal")

SCENARIO_KEYS = (
    "name", "kind", "n_modes", "r", "phi", "r2", "phi2", "xi0", "tau",
    "detector_overlap", "v_scale", "strength", "lo_mode", "seed",
)
GRID_KEYS = ("q", "p", "axis4", "full4d")
OUTPUT_KEYS = ("dir", "format")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    kind: str = "subtract-squeezed"
    n_modes: int = 4
    r: float = 0.5
    phi: float = 0.0
    r2: float = 0.0
    phi2: float = 0.0
    xi0: complex = 1 + 0j
    tau: float = 5.0
    detector_overlap: float = 1.0
    v_scale: float = 1.0
    strength: float = 0.1
    lo_mode: str = "detector"
    seed: int = 0
    q: Axis = DEFAULT_AXIS
    p: Axis = DEFAULT_AXIS
    axis4: Axis = Axis(-4.0, 4.0, 33)
    full4d: bool = False
    dir: str = "out"
    format: str = "csv"
    sweep: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.lo_mode not in LO_MODES:
            raise ConfigError(f"lo_mode must be one of {LO_MODES}, got {self.lo_mode!r}")
        if self.n_modes < 1:
            raise ConfigError("n_modes must be >= 1")
        if not 0.0 <= self.detector_overlap <= 1.0:
            raise ConfigError("detector_overlap must lie in [0, 1]")
        if self.n_modes == 1 and (self.detector_overlap != 1.0 or self.r2 != 0.0):
            raise ConfigError("a single-mode scenario needs detector_overlap = 1 and r2 = 0")
        for key in ("r", "r2", "tau", "v_scale", "strength"):
            if getattr(self, key) < 0:
                raise ConfigError(f"{key} must be non-negative")
        for key, _ in self.sweep:
            if key not in SCENARIO_KEYS or key == "name":
                raise ConfigError(f"cannot sweep {key!r}")

    def with_values(self, **kw) -> ScenarioConfig:
        try:
            return replace(self, **kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _convert(key: str, text: str):
    kind = _TYPES[key]
    text = text.strip()
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "complex":
            return complex(text.replace(" ", ""))
        if kind == "bool":
            low = text.lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(text)
            return low in ("true", "yes", "1")
        if kind == "Axis":
            return Axis.parse(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value) if isinstance(value, Axis) else repr(value) if isinstance(value, (float, complex)) else str(value)


def parse(text: str) -> ScenarioConfig:
    """Parse configuration text; raises :class:`ConfigError` on any problem."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    allowed = {"scenario": SCENARIO_KEYS, "grid": GRID_KEYS, "output": OUTPUT_KEYS}
    values = {}
    sweep = []
    for section in cp.sections():
        if section == "sweep":
            for key, raw in cp.items(section):
                if key not in SCENARIO_KEYS:
                    raise ConfigError(f"unknown sweep key {key!r}")
                items = [s for s in raw.split(",") if s.strip()]
                if not items:
                    raise ConfigError(f"empty sweep range for {key!r}")
                sweep.append((key, tuple(_convert(key, s) for s in items)))
            continue
        if section not in allowed:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in allowed[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            values[key] = _convert(key, raw)
    try:
        return ScenarioConfig(sweep=tuple(sweep), **values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def serialize(cfg: ScenarioConfig) -> str:
    """Canonical text form; ``parse(serialize(cfg)) == cfg``."""
    lines = ["[scenario]"]
    lines += [f"{k} = {_format(getattr(cfg, k))}" for k in SCENARIO_KEYS]
    lines += ["", "[grid]"]
    lines += [f"{k} = {_format(getattr(cfg, k))}" for k in GRID_KEYS]
    lines += ["", "[output]"]
    lines += [f"{k} = {_format(getattr(cfg, k))}" for k in OUTPUT_KEYS]
    if cfg.sweep:
        lines += ["", "[sweep]"]
        lines += [f"{k} = " + ", ".join(_format(v) for v in vals) for k, vals in cfg.sweep]
    return "\n".join(lines) + "\n"


THERMAL_AXIS = Axis(-14.0, 14.0, 281)

PRESETS = {
    "fig3": ScenarioConfig(name="fig3", kind="add-coherent", xi0=1 + 0j),
    # thermal tails decay like exp(-2|a|^2/(1+2 tau)); widen so they stay below 1e-10
    "fig4": ScenarioConfig(
        name="fig4", kind="add-thermal", tau=5.0, q=THERMAL_AXIS, p=THERMAL_AXIS
    ),
    "sv-subtract": ScenarioConfig(name="sv-subtract", kind="subtract-squeezed", r=0.5),
}


def scenario_dict(cfg: ScenarioConfig) -> dict:
    """Scenario parameters as JSON-friendly values."""
    out = {}
    for k in SCENARIO_KEYS:
        v = getattr(cfg, k)
        out[k] = [v.real, v.imag] if isinstance(v, complex) else v
    return out

