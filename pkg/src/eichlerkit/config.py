"""Runtime limits and output preferences.

Values come from (lowest to highest precedence) the defaults below, a JSON or
``key = value`` file named by ``EICHLERKIT_CONFIG``, and explicit overrides.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

ENV_VAR = "EICHLERKIT_CONFIG"


@dataclass
class Config:
    # element-level enumeration (classes, quotients by coset action)
    order_cap: int = 100_000
    # products handled through character-table composition only
    product_order_cap: int = 10_000_000
    # class count above which Dixon-Schneider is refused
    class_cap: int = 2_000
    backtrack_budget: int = 10_000_000
    # deepest level graph that may be requested
    max_depth: int = 6
    catalog_paths: list = field(default_factory=list)
    output_format: str = "table"

    def __post_init__(self):
        for name in ("order_cap", "product_order_cap", "class_cap", "backtrack_budget", "max_depth"):
            if int(getattr(self, name)) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "table", "dot"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def replace(self, **changes) -> "Config":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


def _read_file(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "catalog_paths":
            out[key] = [p.strip() for p in value.split(",") if p.strip()]
        elif key == "output_format":
            out[key] = value
        else:
            out[key] = int(value.replace("_", ""))
    return out


def load_config(**overrides) -> Config:
    values = {}
    path = os.environ.get(ENV_VAR)
    if path:
        values.update(_read_file(path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**values)


_current = None


def get_config() -> Config:
    global _current
    if _current is None:
        _current = load_config()
    return _current


def set_config(cfg: Config) -> None:
    global _current
    _current = cfg
