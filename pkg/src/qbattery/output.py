"""CSV / JSON emitters with deterministic number formatting."""

from __future__ import annotations

import json
import math
from typing import Iterable, Mapping, TextIO

from . import __version__


def fmt(value) -> str:
    """12 significant digits; infinities as ``inf``/``-inf``; always a decimal point."""
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    if v == 0:
        v = 0.0  # drop the sign of -0.0
    s = f"{v:.12g}"
    if not any(c in s for c in ".e"):
        s += ".0"
    return s


def _json_value(value):
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return None
    return float(fmt(v))


def with_version(metadata: Mapping) -> dict:
    return {"version": f"qbattery {__version__}", **metadata}


def write_csv(stream: TextIO, metadata: Mapping, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    for key, value in with_version(metadata).items():
        stream.write(f"# {key}={fmt(value) if not isinstance(value, str) else value}\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def write_json(stream: TextIO, metadata: Mapping, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    header = list(header)
    doc = {
        "metadata": {k: _json_value(v) for k, v in with_version(metadata).items()},
        "columns": header,
        "rows": [dict(zip(header, (_json_value(v) for v in row))) for row in rows],
    }
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def write_table(stream: TextIO, fmt_name: str, metadata: Mapping, header, rows) -> None:
    writer = write_json if fmt_name == "json" else write_csv
    writer(stream, metadata, header, rows)
