"""CSV ingestion and export of transaction amounts."""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

import numpy as np

from .errors import InputFileError

log = logging.getLogger(__name__)


def _as_float(cell: str) -> float | None:
    try:
        x = float(cell.strip())
    except ValueError:
        return None
    return x if math.isfinite(x) else None


def read_amounts(path) -> np.ndarray:
    """Amounts from the first numeric column of a comma-separated UTF-8 file.

    A header row is detected when the first row has no numeric cell where the
    data rows do. Blank lines are skipped.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except (OSError, UnicodeDecodeError) as exc:
        raise InputFileError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputFileError(f"{path} contains no rows")

    def numeric_columns(row):
        return [i for i, c in enumerate(row) if _as_float(c) is not None]

    probe = rows[1] if len(rows) > 1 else rows[0]
    cols = numeric_columns(probe)
    if not cols:
        raise InputFileError(f"{path}: no numeric column found")
    col = cols[0]
    skip = 1 if col not in numeric_columns(rows[0]) else 0
    body = rows[skip:]
    if not body:
        raise InputFileError(f"{path} has a header but no data")
    if len(cols) > 1:
        log.warning("%s has %d numeric columns; using column %d", path, len(cols), col)
    out = np.empty(len(body))
    for i, row in enumerate(body):
        x = _as_float(row[col]) if col < len(row) else None
        if x is None:
            raise InputFileError(f"{path}:{i + skip + 1}: non-numeric amount in {row!r}")
        out[i] = x
    return out


def write_amounts(path, amounts, header: str | None = "amount") -> Path:
    """One amount per row at 17 significant digits, so values round-trip exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header:
            fh.write(header + "\n")
        for x in np.asarray(amounts, dtype=float):
            fh.write(format(x, ".17g") + "\n")
    return path
