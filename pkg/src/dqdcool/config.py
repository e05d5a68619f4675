"""
Run configuration: baseline parameters, unit-suffixed keys and sweep grids.

Canonical keys are SI: angular rates in rad/s, temperatures in K, times in s.
Suffixed aliases are accepted on input: ``*_hz`` (cycles/s, multiplied by
``2 pi``), ``*_k`` (kelvin) and ``*_s`` (seconds).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .constants import TWO_PI
from .errors import ValidationError

__all__ = [
    "PARAMETERS",
    "PROFILES",
    "VARIANTS",
    "MODELS",
    "RunConfig",
    "SweepGrid",
    "load_config",
    "parse_assignments",
    "resolve_key",
]

# canonical name -> (unit kind, baseline value in SI)
PARAMETERS: dict[str, tuple[str, float]] = {
    "T_bath": ("temperature", 1.0),
    "T_set": ("temperature", 0.05),
    "omega_c": ("angular", TWO_PI * 5e9),
    "lambda": ("angular", TWO_PI * 5e9),
    "tau": ("time", 50e-9),
    "R": ("rate", 5e6),
    "Delta": ("angular", 0.0),
    "g": ("angular", TWO_PI * 0.5e6),
    "kappa": ("angular", TWO_PI * 100.0),
    "chi": ("dimensionless", 2.0),
    "gamma_1": ("angular", TWO_PI * 1e4),
    "gamma_phi": ("angular", TWO_PI * 0.3e6),
    "Delta_12": ("angular", 0.0),
}

_SIGNED = {"Delta", "Delta_12"}
_POSITIVE = {"T_bath", "T_set", "omega_c", "tau"}

# suffix -> (unit kind, factor to SI)
_SUFFIXES = {
    "_hz": ("angular", TWO_PI),
    "_k": ("temperature", 1.0),
    "_s": ("time", 1.0),
}

PROFILES: dict[str, dict[str, float]] = {
    "baseline": {},
    "loaded_cavity": {"kappa": TWO_PI * 1e4},
}

VARIANTS = ("one_dot", "two_dot")
MODELS = ("clamped", "persistent", "collision", "lindblad")
_SCALES = ("linear", "log")
_LINDBLAD_METHODS = ("null_space", "time_evolution")

_OPTION_KEYS = {
    "variant", "model", "profile", "output", "n_cutoff", "lindblad_method",
    "sweep_axis", "sweep_min", "sweep_max", "sweep_points", "sweep_scale",
}


def resolve_key(key: str) -> tuple[str, float]:
    """Map an input key to ``(canonical name, factor to SI)``.

    Raises
    ------
    ValidationError
        For unknown keys or a suffix that does not match the parameter's unit.
    """
    if key in PARAMETERS:
        return key, 1.0
    for suffix, (kind, factor) in _SUFFIXES.items():
        if key.endswith(suffix):
            base = key[: -len(suffix)]
            if base in PARAMETERS:
                if PARAMETERS[base][0] != kind:
                    raise ValidationError(
                        f"unit mismatch for key {key!r}: {base!r} is a "
                        f"{PARAMETERS[base][0]} parameter, not {kind}"
                    )
                return base, factor
    raise ValidationError(f"unknown configuration key {key!r}")


def _as_float(key, value) -> float:
    if isinstance(value, bool):
        raise ValidationError(f"key {key!r}: expected a number, got {value!r}")
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"key {key!r}: cannot parse {value!r} as a number") from None
    if not math.isfinite(v):
        raise ValidationError(f"key {key!r}: value must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class SweepGrid:
    """One swept parameter: input `key` (with unit suffix) and its grid in that unit."""

    key: str
    vmin: float
    vmax: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        resolve_key(self.key)
        if int(self.points) != self.points or self.points < 2:
            raise ValidationError(f"sweep_points must be an integer >= 2, got {self.points!r}")
        if not self.vmin < self.vmax:
            raise ValidationError("sweep_min must be < sweep_max")
        if self.scale not in _SCALES:
            raise ValidationError(f"sweep_scale must be one of {_SCALES}, got {self.scale!r}")
        if self.scale == "log" and self.vmin <= 0:
            raise ValidationError("log sweep needs sweep_min > 0")

    @property
    def parameter(self) -> str:
        return resolve_key(self.key)[0]

    def values(self) -> np.ndarray:
        """Grid in the unit of `key`."""
        if self.scale == "log":
            return np.geomspace(self.vmin, self.vmax, int(self.points))
        return np.linspace(self.vmin, self.vmax, int(self.points))

    def si_values(self) -> np.ndarray:
        return self.values() * resolve_key(self.key)[1]


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration (SI units internally)."""

    params: Mapping[str, float]
    variant: str = "one_dot"
    model: str = "clamped"
    profile: str = "baseline"
    sweep: SweepGrid | None = None
    output: str | None = None
    n_cutoff: int = 0
    lindblad_method: str = "null_space"

    def __post_init__(self):
        p = dict(self.params)
        missing = set(PARAMETERS) - set(p)
        if missing:
            raise ValidationError(f"missing parameters: {sorted(missing)}")
        for k, v in p.items():
            if k not in PARAMETERS:
                raise ValidationError(f"unknown parameter {k!r}")
            v = _as_float(k, v)
            if k in _POSITIVE and not v > 0:
                raise ValidationError(f"key {k!r} must be > 0, got {v!r}")
            if k not in _SIGNED and v < 0:
                raise ValidationError(f"key {k!r} must be >= 0, got {v!r}")
            p[k] = v
        object.__setattr__(self, "params", p)
        if self.variant not in VARIANTS:
            raise ValidationError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.model not in MODELS:
            raise ValidationError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.profile not in PROFILES:
            raise ValidationError(f"profile must be one of {tuple(PROFILES)}")
        if int(self.n_cutoff) != self.n_cutoff or self.n_cutoff < 0:
            raise ValidationError("n_cutoff must be a non-negative integer (0 = auto)")
        if self.lindblad_method not in _LINDBLAD_METHODS:
            raise ValidationError(f"lindblad_method must be one of {_LINDBLAD_METHODS}")

    def __getitem__(self, key: str) -> float:
        return self.params[key]

    def with_params(self, **updates) -> "RunConfig":
        """Copy with SI parameter and/or option updates."""
        opts = {k: updates.pop(k) for k in list(updates) if k in {f.name for f in fields(self)}}
        p = dict(self.params)
        p.update(updates)
        return replace(self, params=p, **opts)

    def echo(self) -> dict[str, Any]:
        """Canonical flat key-value form; loading it reproduces this config."""
        out: dict[str, Any] = {k: self.params[k] for k in PARAMETERS}
        out.update(variant=self.variant, model=self.model, profile=self.profile,
                   n_cutoff=int(self.n_cutoff), lindblad_method=self.lindblad_method)
        if self.sweep is not None:
            out.update(sweep_axis=self.sweep.key, sweep_min=self.sweep.vmin,
                       sweep_max=self.sweep.vmax, sweep_points=int(self.sweep.points),
                       sweep_scale=self.sweep.scale)
        if self.output is not None:
            out["output"] = self.output
        return out

    def echo_json(self) -> str:
        return json.dumps(self.echo(), sort_keys=True, separators=(",", ":"))


def parse_assignments(items: Sequence[str]) -> dict[str, Any]:
    """Parse ``key=value`` strings; values are JSON literals or bare strings."""
    out: dict[str, Any] = {}
    for item in items:
        if "=" not in item:
            raise ValidationError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        try:
            val = json.loads(raw)
        except json.JSONDecodeError:
            val = raw.strip()
        out[key] = val
    return out


def _read_document(path: Path) -> dict[str, Any]:
    if not path.exists():
        raise ValidationError(f"config file {str(path)!r} does not exist")
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("#"):
        # an emitted CSV: reuse its config echo
        for line in text.splitlines():
            if line.startswith("# config: "):
                text = line[len("# config: "):]
                break
        else:
            raise ValidationError(f"{str(path)!r} has no '# config:' metadata line")
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {str(path)!r} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a flat JSON object")
    for k, v in doc.items():
        if isinstance(v, (dict, list)):
            raise ValidationError(f"key {k!r}: nested values are not allowed")
    return doc


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | Sequence[str] = (),
                ) -> RunConfig:
    """Build a :class:`RunConfig` from baseline, profile, file and overrides.

    Order of precedence (last wins): baseline values, the profile's values,
    the file, then `overrides` (``key=value`` strings or a mapping).
    """
    doc: dict[str, Any] = _read_document(Path(path)) if path is not None else {}
    if not isinstance(overrides, Mapping):
        overrides = parse_assignments(overrides)
    merged = {**doc, **dict(overrides)}

    profile = merged.get("profile", "baseline")
    if profile not in PROFILES:
        raise ValidationError(f"profile must be one of {tuple(PROFILES)}, got {profile!r}")
    params = {k: v for k, (_, v) in PARAMETERS.items()}
    params.update(PROFILES[profile])

    options: dict[str, Any] = {}
    for layer in (doc, dict(overrides)):
        seen: dict[str, str] = {}
        for key, value in layer.items():
            if key in _OPTION_KEYS:
                options[key] = value
                continue
            name, factor = resolve_key(key)
            if name in seen:
                raise ValidationError(f"keys {seen[name]!r} and {key!r} set the same parameter")
            seen[name] = key
            params[name] = _as_float(key, value) * factor

    sweep = None
    sweep_keys = {"sweep_axis", "sweep_min", "sweep_max", "sweep_points", "sweep_scale"}
    given = sweep_keys & set(options)
    if given:
        need = sweep_keys - {"sweep_scale"}
        if need - given:
            raise ValidationError(f"incomplete sweep: missing {sorted(need - given)}")
        sweep = SweepGrid(
            key=str(options["sweep_axis"]),
            vmin=_as_float("sweep_min", options["sweep_min"]),
            vmax=_as_float("sweep_max", options["sweep_max"]),
            points=options["sweep_points"],
            scale=str(options.get("sweep_scale", "linear")),
        )
    n_cut = options.get("n_cutoff", 0)
    if isinstance(n_cut, bool) or not isinstance(n_cut, (int, float)):
        raise ValidationError(f"key 'n_cutoff': expected an integer, got {n_cut!r}")
    return RunConfig(
        params=params,
        variant=str(options.get("variant", "one_dot")),
        model=str(options.get("model", "clamped")),
        profile=profile,
        sweep=sweep,
        output=None if options.get("output") is None else str(options["output"]),
        n_cutoff=n_cut,
        lindblad_method=str(options.get("lindblad_method", "null_space")),
    )
