"""Deterministic CSV and JSON output helpers."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math

import numpy as np

__all__ = ["config_hash", "format_value", "render_csv", "to_json"]


def config_hash(config: dict) -> str:
    """SHA-256 of the canonical (sorted, compact) JSON encoding."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def format_value(v) -> str:
    """Floats at 17 significant digits (exact round trip), bools as true/false."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return "%.17g" % v
    return str(v)


def render_csv(rows, columns, meta: dict) -> str:
    """
    CSV text with a leading ``#`` metadata line and a header row.

    ``meta`` is written as sorted ``key=value`` pairs; no wall-clock data is
    included so identical inputs give byte-identical output.
    """
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={meta[k]}" for k in sorted(meta)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"
