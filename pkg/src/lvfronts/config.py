"""Experiment configuration: flat INI sections or an equivalent JSON object.

Sections and keys:

[model]     d, r, a, b
[grid]      x_min, x_max, n, boundary (neumann | pinned)
[ic]        scenario (compact-both | compact-u | step | custom),
            u_support, u_amplitude, v_support, v_amplitude, v_background,
            taper, x_u, x_v
[analysis]  t_end, dt, output_every, ops (comma list: track-front, speed,
            bramson, shift, segregation, terrace, certify-invasion),
            level, window_start, window_end, assumed_speed, cone_speed,
            expected_center
[output]    dir, run_id, formats (csv,json)

Validation is not fail-fast: all problems are collected and reported
together.  Unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import io
import json
from dataclasses import dataclass, field, asdict

from .model import ModelParams
from .sim import Grid, InitialCondition

__all__ = ["ExperimentConfig", "ConfigError", "parse_config"]


class ConfigError(ValueError):
    """Carries every validation problem found in a config."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


_SCHEMA = {
    "model": {"d": float, "r": float, "a": float, "b": float},
    "grid": {"x_min": float, "x_max": float, "n": int, "boundary": str},
    "ic": {
        "scenario": str,
        "u_support": "interval", "u_amplitude": float,
        "v_support": "interval", "v_amplitude": float,
        "v_background": float, "taper": float,
        "x_u": float, "x_v": float,
    },
    "analysis": {
        "t_end": float, "dt": float, "output_every": float, "ops": "list",
        "level": float, "window_start": float, "window_end": float,
        "assumed_speed": float, "cone_speed": float,
        "expected_center": float,
    },
    "output": {"dir": str, "run_id": str, "formats": "list"},
}

_KNOWN_OPS = ("track-front", "speed", "bramson", "shift", "segregation",
              "terrace", "certify-invasion")


@dataclass
class ExperimentConfig:
    model: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    ic: dict = field(default_factory=dict)
    analysis: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def model_params(self) -> ModelParams:
        return ModelParams(**self.model)

    def grid_obj(self) -> Grid:
        g = dict(self.grid)
        g.setdefault("boundary", "neumann")
        return Grid(**g)

    def initial_condition(self) -> InitialCondition:
        kw = dict(self.ic)
        for key in ("u_support", "v_support"):
            if key in kw:
                kw[key] = tuple(kw[key])
        return InitialCondition(**kw)

    def echo(self) -> dict:
        return asdict(self)


def _coerce(section: str, key: str, raw, errors: list):
    kind = _SCHEMA[section][key]
    try:
        if kind is float:
            return float(raw)
        if kind is int:
            v = float(raw)
            if v != int(v):
                raise ValueError
            return int(v)
        if kind is str:
            return str(raw)
        if kind == "list":
            if isinstance(raw, (list, tuple)):
                return [str(s) for s in raw]
            return [s.strip() for s in str(raw).split(",") if s.strip()]
        if kind == "interval":
            if isinstance(raw, (list, tuple)):
                pair = [float(v) for v in raw]
            else:
                pair = [float(s) for s in str(raw).replace(",", " ").split()]
            if len(pair) != 2:
                raise ValueError
            return tuple(pair)
    except (TypeError, ValueError):
        errors.append(f"[{section}] {key}: cannot parse {raw!r}")
        return None
    raise AssertionError(kind)


def _validate(cfg: ExperimentConfig, errors: list):
    m = cfg.model
    for key in ("d", "r", "a", "b"):
        if key not in m:
            errors.append(f"[model] missing {key}")
    if m.get("d", 1.0) is not None and m.get("d", 1.0) <= 0:
        errors.append("[model] d must be positive")
    if m.get("r", 1.0) is not None and m.get("r", 1.0) <= 0:
        errors.append("[model] r must be positive")

    g = cfg.grid
    if g:
        if g.get("x_max", 1.0) <= g.get("x_min", 0.0):
            errors.append("[grid] x_max must exceed x_min")
        if g.get("n", 16) < 16:
            errors.append("[grid] n must be at least 16")
        if g.get("boundary", "neumann") not in ("neumann", "pinned"):
            errors.append("[grid] unknown boundary rule")

    ic = cfg.ic
    if ic:
        sc = ic.get("scenario")
        if sc not in ("compact-both", "compact-u", "step", "custom"):
            errors.append(f"[ic] unknown scenario {sc!r}")
        if g and sc in ("compact-both", "compact-u") and "n" in g:
            dx = (g["x_max"] - g["x_min"]) / (g["n"] - 1)
            pads = [ic.get("u_support")]
            if sc == "compact-both":
                pads.append(ic.get("v_support"))
            for sup in pads:
                if sup and (sup[0] - 10 * dx < g["x_min"]
                            or sup[1] + 10 * dx > g["x_max"]):
                    errors.append(
                        "[ic] support must sit 10 dx inside the grid")

    for op in cfg.analysis.get("ops", []):
        if op not in _KNOWN_OPS:
            errors.append(f"[analysis] unknown op {op!r}")


def parse_config(text: str) -> ExperimentConfig:
    """Parse and fully validate a config from INI or JSON text."""
    errors: list[str] = []
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"invalid JSON: {exc}"]) from exc
        if not isinstance(data, dict):
            raise ConfigError(["top-level JSON value must be an object"])
        sections = {str(k): v for k, v in data.items()}
    else:
        cp = configparser.ConfigParser()
        try:
            cp.read_file(io.StringIO(text))
        except configparser.Error as exc:
            raise ConfigError([f"invalid INI: {exc}"]) from exc
        sections = {s: dict(cp.items(s)) for s in cp.sections()}

    cfg = ExperimentConfig()
    for sec, values in sections.items():
        if sec not in _SCHEMA:
            errors.append(f"unknown section [{sec}]")
            continue
        if not isinstance(values, dict):
            errors.append(f"[{sec}] must be a table of keys")
            continue
        out = getattr(cfg, sec)
        for key, raw in values.items():
            if key not in _SCHEMA[sec]:
                errors.append(f"[{sec}] unknown key {key!r}")
                continue
            val = _coerce(sec, key, raw, errors)
            if val is not None:
                out[key] = val

    _validate(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg
