# Shared config-file utilities for all modules.
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Iterable, Mapping

from src.common.errors import ConfigError

OVERRIDE_PREFIX = "OVERRIDE_"


def parse_keyvalue_lines(lines: Iterable[str], source: str = "<text>") -> dict[str, str]:
    values: dict[str, str] = {}
    for number, raw_line in enumerate(lines, start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected 'key = value', got {raw_line!r}")
        key, value = line.split("=", 1)
        # Trailing comments are allowed after the value.
        value = value.split("#", 1)[0]
        normalized_key = key.strip().lower()
        normalized_value = value.strip().strip("'").strip('"')
        if not normalized_key:
            raise ConfigError(f"{source}:{number}: empty key")
        values[normalized_key] = normalized_value
    return values


def _flatten(payload: Mapping[str, Any], prefix: str = "") -> dict[str, str]:
    flat: dict[str, str] = {}
    for key, value in payload.items():
        dotted = f"{prefix}{key}".lower()
        if isinstance(value, Mapping):
            flat.update(_flatten(value, prefix=f"{dotted}."))
        elif isinstance(value, (list, tuple)):
            flat[dotted] = ", ".join(str(item) for item in value)
        elif isinstance(value, bool):
            flat[dotted] = "true" if value else "false"
        else:
            flat[dotted] = str(value)
    return flat


def read_keyvalue_file(path: Path) -> dict[str, str]:
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError(f"{path}: top-level JSON value must be an object")
        return _flatten(payload)
    return parse_keyvalue_lines(text.splitlines(), source=str(path))


def env_overrides(environ: Mapping[str, str] | None = None) -> dict[str, str]:
    env = os.environ if environ is None else environ
    overrides: dict[str, str] = {}
    for name, value in env.items():
        if not name.startswith(OVERRIDE_PREFIX):
            continue
        dotted = name[len(OVERRIDE_PREFIX):].lower().replace("__", ".")
        if dotted:
            overrides[dotted] = value.strip()
    return overrides


def explain_loaded_keys(keys: Iterable[str]) -> str:
    return ", ".join(sorted(keys))
