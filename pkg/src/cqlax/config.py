"""Run configuration: strict schema, file/flag merge with provenance."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

FORMATS = ("json", "csv", "svg")
TOP_KEYS = {"command", "family", "params", "grid", "time", "tolerances", "out", "formats"}
GRID_KEYS = ("x_min", "x_max", "n_points")
TIME_KEYS = ("t0", "t1", "dt")


@dataclass(frozen=True)
class CommandSchema:
    """Allowed keys and defaults for one subcommand."""

    params: dict
    families: tuple = ()
    family: str | None = None
    grid: dict | None = None
    time: dict | None = None
    tolerances: dict = field(default_factory=dict)
    integer_params: tuple = ()


@dataclass
class RunConfig:
    command: str
    family: str | None
    params: dict
    grid: dict | None
    time: dict | None
    tolerances: dict
    out: str
    formats: tuple
    provenance: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {
            "command": self.command, "family": self.family, "params": dict(self.params),
            "grid": self.grid, "time": self.time, "tolerances": dict(self.tolerances),
            "formats": list(self.formats), "provenance": dict(self.provenance),
        }


def read_config_file(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {p}: {e.strerror or e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON in {p} at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError(f"config.{sorted(unknown)[0]}: unknown key")
    return data


def _number(path: str, v, integer: bool = False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{path}: must be finite")
    if integer:
        if v != int(v):
            raise ConfigError(f"{path}: expected an integer, got {v!r}")
        return int(v)
    return v


def _merge_section(name: str, keys, default: dict | None, file_part, flag_part: dict, prov: dict,
                   integer_keys=()) -> dict | None:
    if default is None:
        if file_part or any(v is not None for v in flag_part.values()):
            raise ConfigError(f"config.{name}: not used by this command")
        return None
    if file_part is not None and not isinstance(file_part, dict):
        raise ConfigError(f"config.{name}: expected an object")
    file_part = file_part or {}
    unknown = set(file_part) - set(keys)
    if unknown:
        raise ConfigError(f"config.{name}.{sorted(unknown)[0]}: unknown key")
    out = {}
    for k in keys:
        if flag_part.get(k) is not None:
            out[k], prov[f"{name}.{k}"] = flag_part[k], "flag"
        elif k in file_part:
            out[k], prov[f"{name}.{k}"] = file_part[k], "file"
        else:
            out[k], prov[f"{name}.{k}"] = default[k], "default"
        if out[k] is not None:
            out[k] = _number(f"config.{name}.{k}", out[k], k in integer_keys)
    return out


def validate_grid(grid: dict | None) -> None:
    if grid is None or None in grid.values():
        return
    if not grid["x_min"] < grid["x_max"]:
        raise ConfigError("config.grid: x_min must be below x_max")
    if grid["n_points"] < 16:
        raise ConfigError("config.grid.n_points: must be at least 16")


def validate_time(time: dict | None) -> None:
    if time is None or None in time.values():
        return
    if not time["t0"] < time["t1"]:
        raise ConfigError("config.time: t0 must be below t1")
    if not time["dt"] > 0:
        raise ConfigError("config.time.dt: must be positive")


def load_config(command: str, schema: CommandSchema, path=None, flags: dict | None = None) -> RunConfig:
    """Merge defaults < config file < flags and validate.

    ``flags`` uses the keys params (dict), family, grid (dict), time (dict),
    tolerances (dict), out, formats; ``None`` means not given.
    """
    flags = flags or {}
    data = read_config_file(path) if path else {}
    if "command" in data and data["command"] != command:
        raise ConfigError(f"config.command: file is for {data['command']!r}, invoked {command!r}")
    prov: dict = {}

    # params
    fparams = data.get("params", {}) or {}
    if not isinstance(fparams, dict):
        raise ConfigError("config.params: expected an object")
    gparams = {k: v for k, v in (flags.get("params") or {}).items() if v is not None}
    for src, d in (("config.params", fparams), ("flag", gparams)):
        unknown = set(d) - set(schema.params)
        if unknown:
            raise ConfigError(f"{src}.{sorted(unknown)[0]}: unknown parameter for {command!r}")
    params = {}
    for k, default in schema.params.items():
        if k in gparams:
            v, prov[f"params.{k}"] = gparams[k], "flag"
        elif k in fparams:
            v, prov[f"params.{k}"] = fparams[k], "file"
        else:
            v, prov[f"params.{k}"] = default, "default"
        if v is None:
            params[k] = None
            continue
        params[k] = _number(f"config.params.{k}", v, k in schema.integer_params)

    # family
    fam = flags.get("family")
    if fam is not None:
        prov["family"] = "flag"
    elif "family" in data:
        fam, prov["family"] = data["family"], "file"
    else:
        fam, prov["family"] = schema.family, "default"
    if schema.families:
        if fam not in schema.families:
            raise ConfigError(f"config.family: {fam!r} not one of {list(schema.families)}")
    elif fam is not None and prov["family"] != "default":
        raise ConfigError("config.family: this command takes no family")

    grid = _merge_section("grid", GRID_KEYS, schema.grid, data.get("grid"), flags.get("grid") or {}, prov,
                          ("n_points",))
    validate_grid(grid)
    time = _merge_section("time", TIME_KEYS, schema.time, data.get("time"), flags.get("time") or {}, prov)
    validate_time(time)

    tols = dict(schema.tolerances)
    for k in tols:
        prov[f"tolerances.{k}"] = "default"
    for src, d in (("file", data.get("tolerances") or {}), ("flag", flags.get("tolerances") or {})):
        if not isinstance(d, dict):
            raise ConfigError("config.tolerances: expected an object")
        for k, v in d.items():
            if k not in schema.tolerances:
                raise ConfigError(f"config.tolerances.{k}: unknown tolerance for {command!r}")
            v = _number(f"config.tolerances.{k}", v)
            if not v > 0:
                raise ConfigError(f"config.tolerances.{k}: must be positive")
            tols[k], prov[f"tolerances.{k}"] = v, src

    out = flags.get("out")
    if out is not None:
        prov["out"] = "flag"
    elif "out" in data:
        out, prov["out"] = data["out"], "file"
    else:
        out, prov["out"] = "cqlax-out", "default"
    if not isinstance(out, str) or not out:
        raise ConfigError("config.out: expected a non-empty string")

    formats = flags.get("formats")
    if formats is not None:
        prov["formats"] = "flag"
    elif "formats" in data:
        formats, prov["formats"] = data["formats"], "file"
    else:
        formats, prov["formats"] = ["json"], "default"
    if isinstance(formats, str):
        formats = [f.strip() for f in formats.split(",") if f.strip()]
    if not isinstance(formats, list) or not formats or any(f not in FORMATS for f in formats):
        raise ConfigError(f"config.formats: expected a non-empty subset of {list(FORMATS)}")
    formats = tuple(f for f in FORMATS if f in formats)

    return RunConfig(command, fam, params, grid, time, tols, out, formats, prov)
