"""Service and pipeline configuration: JSON file plus environment overrides.

Environment variables use the CONCEPTMAP_ prefix and win over file values.
Rule toggles accept either a list of rule ids or a {rule: bool} map in the
file, and CONCEPTMAP_PRUNE_R1=0 style switches in the environment.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .dominate import RULE_IDS

_TRUTHY = {"1", "true", "yes", "on"}
_FALSY = {"0", "false", "no", "off"}


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    host: str = "127.0.0.1"
    port: int = 8570
    store_dir: str = "./conceptmap-store"
    gazetteer_dir: str | None = None
    coref_window: int = 2
    prune_rules: tuple[str, ...] = RULE_IDS

    def store_path(self) -> Path:
        return Path(self.store_dir)


def _parse_bool(raw: str, name: str) -> bool:
    lowered = raw.strip().casefold()
    if lowered in _TRUTHY:
        return True
    if lowered in _FALSY:
        return False
    raise ConfigError(f"{name}: expected a boolean, got {raw!r}")


def _rules_from_value(value, source: str) -> tuple[str, ...]:
    if isinstance(value, dict):
        enabled = [r for r in RULE_IDS if value.get(r, True)]
        unknown = set(value) - set(RULE_IDS)
    elif isinstance(value, (list, tuple)):
        enabled = [r for r in RULE_IDS if r in value]
        unknown = set(value) - set(RULE_IDS)
    else:
        raise ConfigError(f"{source}: prune_rules must be a list or a map")
    if unknown:
        raise ConfigError(f"{source}: unknown rule ids {sorted(unknown)}")
    return tuple(enabled)


def load_config(path: str | Path | None = None, env: dict | None = None) -> Config:
    env = os.environ if env is None else env
    cfg = Config()

    if path is not None:
        p = Path(path)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {p}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"{p}: invalid JSON: {e.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{p}: top level must be an object")
        known = {"host", "port", "store_dir", "gazetteer_dir", "coref_window", "prune_rules"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"{p}: unknown keys {sorted(unknown)}")
        if "host" in data:
            cfg.host = str(data["host"])
        if "port" in data:
            cfg.port = int(data["port"])
        if "store_dir" in data:
            cfg.store_dir = str(data["store_dir"])
        if "gazetteer_dir" in data and data["gazetteer_dir"] is not None:
            cfg.gazetteer_dir = str(data["gazetteer_dir"])
        if "coref_window" in data:
            cfg.coref_window = int(data["coref_window"])
        if "prune_rules" in data:
            cfg.prune_rules = _rules_from_value(data["prune_rules"], str(p))

    if "CONCEPTMAP_HOST" in env:
        cfg.host = env["CONCEPTMAP_HOST"]
    if "CONCEPTMAP_PORT" in env:
        try:
            cfg.port = int(env["CONCEPTMAP_PORT"])
        except ValueError:
            raise ConfigError("CONCEPTMAP_PORT must be an integer") from None
    if "CONCEPTMAP_STORE_DIR" in env:
        cfg.store_dir = env["CONCEPTMAP_STORE_DIR"]
    if "CONCEPTMAP_GAZETTEER_DIR" in env:
        cfg.gazetteer_dir = env["CONCEPTMAP_GAZETTEER_DIR"] or None
    if "CONCEPTMAP_COREF_WINDOW" in env:
        try:
            cfg.coref_window = int(env["CONCEPTMAP_COREF_WINDOW"])
        except ValueError:
            raise ConfigError("CONCEPTMAP_COREF_WINDOW must be an integer") from None
    rules = list(cfg.prune_rules)
    for rule in RULE_IDS:
        key = f"CONCEPTMAP_PRUNE_{rule}"
        if key in env:
            on = _parse_bool(env[key], key)
            if on and rule not in rules:
                rules.append(rule)
            if not on and rule in rules:
                rules.remove(rule)
    cfg.prune_rules = tuple(r for r in RULE_IDS if r in rules)

    if cfg.coref_window < 0:
        raise ConfigError("coref_window must be >= 0")
    if not 0 < cfg.port < 65536:
        raise ConfigError("port must be in 1..65535")
    return cfg
