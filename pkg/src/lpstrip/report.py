"""Byte-stable JSON and CSV serialization of run results."""

from __future__ import annotations

import csv
import io
import json

from . import __version__
from .experiments import SweepRecord

SWEEP_HEADER = SweepRecord.FIELDS


def json_document(command: str, params: dict, result, seed=None) -> str:
    """Sorted-key JSON with the version, seed and every parameter."""
    doc = {
        "version": __version__,
        "command": command,
        "params": params,
        "seed": seed,
        "result": result,
    }
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def csv_table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    # repr keeps every float bit, so identical runs give identical bytes
    if isinstance(v, float):
        return repr(v)
    return v


def sweep_csv(records) -> str:
    return csv_table(SWEEP_HEADER, ([getattr(rec, k) for k in SWEEP_HEADER] for rec in records))


def emit(text: str, out=None, stream=None) -> None:
    """Write to ``out`` when given, otherwise to ``stream``."""
    if out is None:
        stream.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
