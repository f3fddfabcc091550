"""Deterministic text output: 17-digit floats, JSON with fixed float format, atomic writes."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

OUT_ENV = "SPHEROIDAL_OUT"


def fmt(x: float) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def dumps_json(obj) -> str:
    """json.dumps, except every float is written with 17 significant digits."""
    floats: list[str] = []

    def mark(o):
        if isinstance(o, dict):
            return {k: mark(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [mark(v) for v in o]
        if isinstance(o, np.ndarray):
            return mark(o.tolist())
        if isinstance(o, (bool, np.bool_)):
            return bool(o)
        if isinstance(o, (int, np.integer)):
            return int(o)
        if isinstance(o, (float, np.floating)):
            floats.append(fmt(o) if np.isfinite(o) else "null")
            return f"@@F{len(floats) - 1}@@"
        return o

    text = json.dumps(mark(obj), indent=2)
    for i, s in enumerate(floats):
        text = text.replace(f'"@@F{i}@@"', s, 1)
    return text + "\n"


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, "."))


def atomic_write(path, text: str) -> Path:
    """Write via a temporary file in the target directory, then rename over `path`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
