"""CSV and manifest writers. Numbers use 17 significant digits in scientific notation."""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

NUMBER_FORMAT = "%.16e"


def format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return NUMBER_FORMAT % float(v)
    return str(v)


def write_csv(path: str | Path, header, rows) -> Path:
    """Comma-separated file with one header row; floats as '%.16e'."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        lines.append(",".join(format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path: str | Path) -> tuple[list, list]:
    """Inverse of :func:`write_csv`: header and rows of strings."""
    text = Path(path).read_text().splitlines()
    return text[0].split(","), [line.split(",") for line in text[1:]]


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def write_json(path: str | Path, data: dict) -> Path:
    """Atomic JSON write (temp file then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    os.replace(tmp, path)
    return path


def read_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


__all__ = ["NUMBER_FORMAT", "format_cell", "read_csv", "read_json", "write_csv", "write_json"]
