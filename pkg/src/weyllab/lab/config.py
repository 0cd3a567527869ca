"""TOML experiment configs.  Unknown keys anywhere are usage errors."""
from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import UsageError
from .commands import REGISTRY

TOP_KEYS = {"command", "seed", "out", "threads", "params"}


@dataclass
class ExperimentConfig:
    command: str
    params: dict[str, Any]
    seed: int = 0
    out: str = "runs"
    threads: int = 1

    def ladder(self) -> list[dict[str, Any]]:
        """Expand list-valued ladder parameters into one parameter set per point."""
        cmd = REGISTRY[self.command]
        sets = [dict(self.params)]
        for key in cmd.ladder:
            vals = self.params.get(key)
            if isinstance(vals, list):
                sets = [dict(s, **{key: v}) for s in sets for v in vals]
        return sets


def _check_type(cmd: str, key: str, value, default):
    where = f"params.{key}"
    ladder = key in REGISTRY[cmd].ladder
    if ladder and isinstance(value, list):
        if not value:
            raise UsageError(f"{where}: empty ladder")
        return [_check_type(cmd, key, v, default) for v in value]
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise UsageError(f"{where}: expected true/false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise UsageError(f"{where}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UsageError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise UsageError(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list):
            value = [value]
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float, str)):
                raise UsageError(f"{where}: bad list entry {v!r}")
        return value
    if isinstance(default, dict):
        if not isinstance(value, dict):
            raise UsageError(f"{where}: expected a table, got {value!r}")
        return value
    return value


def parse_config(data: dict, command: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    data = copy.deepcopy(data)
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    cmd = command or data.get("command")
    if cmd is None:
        raise UsageError("command: missing")
    if data.get("command") not in (None, cmd):
        raise UsageError(f"command: config says {data['command']!r}, command line says {cmd!r}")
    if cmd not in REGISTRY:
        raise UsageError(f"command: unknown command {cmd!r}")
    schema = REGISTRY[cmd].params
    given = dict(data.get("params", {}))
    given.update(overrides or {})
    bad = set(given) - set(schema)
    if bad:
        raise UsageError("; ".join(f"params.{k}: unknown parameter for {cmd}" for k in sorted(bad)))
    params = {k: copy.deepcopy(v) for k, v in schema.items()}
    for k, v in given.items():
        params[k] = _check_type(cmd, k, v, schema[k])
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise UsageError("seed: expected an unsigned 64-bit integer")
    threads = data.get("threads", 1)
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise UsageError("threads: expected a positive integer")
    out = data.get("out", "runs")
    if not isinstance(out, str):
        raise UsageError("out: expected a path string")
    return ExperimentConfig(cmd, params, seed, out, threads)


def load_config(path, command: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"config {path}: {exc}") from exc
    return parse_config(data, command, overrides)


def parse_override(text: str) -> tuple[str, Any]:
    """key=value with a TOML value (bare words are taken as strings)."""
    if "=" not in text:
        raise UsageError(f"--set expects key=value, got {text!r}")
    key, raw = text.split("=", 1)
    key = key.strip()
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return key, value
