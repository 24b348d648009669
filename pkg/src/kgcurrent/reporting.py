"""Delimited output and sidecar metadata.

Every run writes the same bytes for the same inputs: floats go out with
17 significant digits (round-trip exact for doubles), line endings are
LF, JSON keys are sorted, and nothing records a clock.  Each CSV gets a
*.meta.json sidecar echoing the effective configuration that produced
it, so a directory of outputs is self-describing.
"""

import json
from pathlib import Path

import numpy as np


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path, header, columns) -> Path:
    """Columns of equal length under a one-line header."""
    path = Path(path)
    cols = [np.asarray(c) for c in columns]
    if len(header) != len(cols) or len({c.size for c in cols}) != 1:
        raise ValueError("header/column mismatch")
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_meta(csv_path, config: dict) -> Path:
    """Sidecar <name>.meta.json next to a CSV."""
    csv_path = Path(csv_path)
    return write_json(csv_path.with_suffix(csv_path.suffix + ".meta.json"),
                      config)
