from __future__ import annotations

from pathlib import Path
from typing import Mapping

import pandas as pd

from src import __version__


def format_float(value: float) -> str:
    """Shortest round-trip text for a float."""
    return repr(float(value))


def write_result_csv(
    path: Path,
    frame: pd.DataFrame,
    parameters: Mapping[str, str],
    results: Mapping[str, float] | None = None,
) -> Path:
    """Write ``frame`` under a '# key = value' provenance header."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {key} = {value}" for key, value in parameters.items()]
    lines.append(f"# version = {__version__}")
    for key, value in (results or {}).items():
        lines.append(f"# result.{key} = {format_float(value)}")

    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")
        frame.to_csv(handle, index=False, float_format=format_float, na_rep="", lineterminator="\n")
    return path


def read_result_csv(path: Path) -> tuple[dict[str, str], pd.DataFrame]:
    header: dict[str, str] = {}
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition("=")
            header[key.strip()] = value.strip()
    return header, pd.read_csv(path, comment="#")
