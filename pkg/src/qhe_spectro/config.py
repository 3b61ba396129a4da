"""Run configuration: flat, dot-namespaced JSON.

Example::

    {
      "mode": "compare",
      "grids.tau.min": 0.2, "grids.tau.max": 0.8, "grids.tau.points": 4,
      "point.lambda_prime": 1.0,
      "output.precision": 12
    }

Model parameters carry their unit in the key (``model.Omega_p_eV``,
``model.Gamma_2_ps``). Every key not listed in :data:`DEFAULTS` or matching
``grids.<axis>.<field>`` is rejected.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidParams
from .params import fig2_params
from .units import ROOM_TEMPERATURE_EV

MODES = ("fig2", "fig3", "validate", "scan", "compare")

DEFAULTS = {
    "model.Omega_p_eV": 1e-4,
    "model.Gamma_2_ps": 0.025,
    "model.n_2": 1000.0,
    "model.Gamma_c_ps": 0.0,
    "model.lam_eV": 0.0,
    "model.T_c_eV": ROOM_TEMPERATURE_EV,
    "model.omega_c_eV": 0.1,
    "model.omega_10_eV": 1.9,
    "point.tau": 0.5,
    "point.c_p": 4.0,
    "point.c_p_prime": 3.0,
    "point.lambda_prime": 1.0,
    "point.gamma_c": 1.5,
    "output.csv_path": None,
    "output.svg_path": None,
    "output.precision": 12,
    "tolerances.ode_rel": 1e-9,
    "tolerances.ode_abs": 1e-12,
    "tolerances.oracle_rel": 1e-6,
    "validate.seed": 0,
    "validate.draws": 200,
    "validate.cold_rate_factor": 2.0,
}

GRID_FIELDS = ("min", "max", "points", "spacing")
SPACINGS = ("linear", "log")

# axes each mode scans, with default grids used when the config names none
MODE_AXES = {
    "fig2": ("t",),
    "fig3": ("eta_C", "c_p"),
    "scan": ("tau", "c_p", "lambda_prime"),
    "compare": ("tau", "c_p_prime", "lambda_prime", "gamma_c"),
    "validate": (),
}

DEFAULT_GRIDS = {
    "eta_C": (0.02, 0.98, 49, "linear"),
    "c_p": (1.1, 10.0, 90, "linear"),
}


@dataclass(frozen=True)
class GridAxis:
    name: str
    min: float
    max: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if not isinstance(self.points, int) or isinstance(self.points, bool) or self.points < 1:
            raise ConfigError(f"grids.{self.name}.points must be a positive integer")
        if self.spacing not in SPACINGS:
            raise ConfigError(f"grids.{self.name}.spacing must be one of {SPACINGS}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or self.max < self.min:
            raise ConfigError(f"grids.{self.name} needs finite min <= max")
        if self.points > 1 and self.max == self.min:
            raise ConfigError(f"grids.{self.name} has several points on an empty interval")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigError(f"grids.{self.name}: log spacing needs min > 0")

    def values(self):
        if self.points == 1:
            return np.array([float(self.min)])
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class RunConfig:
    mode: str
    settings: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.settings[key]

    @property
    def precision(self):
        return self.settings["output.precision"]

    def model_params(self):
        s = self.settings
        try:
            return fig2_params(
                Omega_p=s["model.Omega_p_eV"], Gamma_2=s["model.Gamma_2_ps"], n_2=s["model.n_2"],
                Gamma_c=s["model.Gamma_c_ps"], lam=s["model.lam_eV"], T_c=s["model.T_c_eV"],
                omega_c=s["model.omega_c_eV"], omega_10=s["model.omega_10_eV"],
            )
        except (InvalidParams, ValueError) as exc:
            raise ConfigError(f"invalid model parameters: {exc}") from None

    def axis(self, name, default=None):
        """Grid for ``name``; falls back to ``default`` then to ``point.<name>``."""
        if name in self.grids:
            return self.grids[name]
        if default is not None:
            return GridAxis(name, *default)
        fixed = self.settings.get(f"point.{name}")
        if fixed is None:
            raise ConfigError(f"mode {self.mode} needs grids.{name}.* or point.{name}")
        return GridAxis(name, fixed, fixed, 1)

    def to_flat(self):
        flat = {"mode": self.mode, **self.settings}
        for name, g in self.grids.items():
            flat.update({f"grids.{name}.{f}": getattr(g, f) for f in GRID_FIELDS})
        return dict(sorted(flat.items()))

    def dumps(self):
        """Canonical JSON; floats use repr, so parsing it back is lossless."""
        return json.dumps(self.to_flat(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def digest(self):
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()


def _reject_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ConfigError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _number(key, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{key} must be an integer")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite")
    return value


def from_flat(flat: dict, mode=None) -> RunConfig:
    flat = dict(flat)
    file_mode = flat.pop("mode", None)
    if mode is None:
        mode = file_mode
    elif file_mode is not None and file_mode != mode:
        raise ConfigError(f"config is for mode {file_mode!r}, not {mode!r}")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")

    settings = dict(DEFAULTS)
    grid_parts: dict[str, dict] = {}
    for key, value in flat.items():
        if not isinstance(key, str):
            raise ConfigError(f"bad key {key!r}")
        if key.startswith("grids."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] not in GRID_FIELDS or not parts[1]:
                raise ConfigError(f"bad grid key {key!r}")
            grid_parts.setdefault(parts[1], {})[parts[2]] = value
            continue
        if key not in DEFAULTS:
            raise ConfigError(f"unknown key {key!r}")
        if key.startswith("output.") and key.endswith("_path"):
            if value is not None and not isinstance(value, str):
                raise ConfigError(f"{key} must be a string")
            settings[key] = value
        elif key in ("output.precision", "validate.seed", "validate.draws"):
            settings[key] = _number(key, value, int)
        else:
            settings[key] = _number(key, value)

    if not 6 <= settings["output.precision"] <= 17:
        raise ConfigError("output.precision must lie in [6, 17]")
    if settings["validate.draws"] < 1:
        raise ConfigError("validate.draws must be >= 1")

    grids = {}
    for name, parts in sorted(grid_parts.items()):
        if name not in MODE_AXES[mode]:
            raise ConfigError(f"mode {mode} has no axis {name!r} (axes: {MODE_AXES[mode]})")
        missing = {"min", "max", "points"} - parts.keys()
        if missing:
            raise ConfigError(f"grids.{name} lacks {sorted(missing)}")
        spacing = parts.get("spacing", "linear")
        if not isinstance(spacing, str):
            raise ConfigError(f"grids.{name}.spacing must be a string")
        grids[name] = GridAxis(
            name,
            _number(f"grids.{name}.min", parts["min"]),
            _number(f"grids.{name}.max", parts["max"]),
            _number(f"grids.{name}.points", parts["points"], int),
            spacing,
        )
    return RunConfig(mode, settings, grids)


def loads(text: str, mode=None) -> RunConfig:
    try:
        flat = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(flat, dict):
        raise ConfigError("config must be a JSON object")
    for key, value in flat.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(f"{key}: nested values are not allowed; use dotted keys")
    return from_flat(flat, mode)


def load(path, mode=None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return loads(text, mode)
