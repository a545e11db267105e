"""CSV / JSON emission of run records.

A payload is a mapping ``table name -> list of row dicts``.  CSV output
starts with a ``#`` header carrying the command, version and every parameter,
then one block per table.  Floats are written with 17 significant digits.
"""
from __future__ import annotations

import io
import json
import math
import subprocess
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__


def version_string() -> str:
    try:
        sha = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        ).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        sha = ""
    return f"{__version__}+g{sha}" if sha else __version__


@dataclass
class RunRecord:
    command: str
    params: dict
    version: str
    duration_s: float
    payload: dict


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating, Fraction)):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


def _csv_cell(v) -> str:
    v = _plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if isinstance(v, list):
        return ";".join(_csv_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def render_csv(rec: RunRecord) -> str:
    buf = io.StringIO()
    buf.write(f"# command={rec.command}\n")
    buf.write(f"# version={rec.version}\n")
    for k, v in rec.params.items():
        buf.write(f"# param {k}={_csv_cell(v)}\n")
    buf.write(f"# duration_s={rec.duration_s:.6f}\n")
    for name, rows in rec.payload.items():
        buf.write(f"# table={name}\n")
        if not rows:
            continue
        cols = list(rows[0].keys())
        buf.write(",".join(cols) + "\n")
        for r in rows:
            buf.write(",".join(_csv_cell(r[c]) for c in cols) + "\n")
    return buf.getvalue()


def render_json(rec: RunRecord) -> str:
    doc = {
        "command": rec.command,
        "params": _plain(rec.params),
        "version": rec.version,
        "duration_s": round(rec.duration_s, 6),
        "payload": _plain(rec.payload),
    }
    return json.dumps(doc, indent=2) + "\n"


def emit(rec: RunRecord, fmt: str, out=None) -> str:
    text = render_csv(rec) if fmt == "csv" else render_json(rec)
    if out:
        Path(out).write_text(text)
    return text
