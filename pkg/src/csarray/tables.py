"""Plain-text file formats: element tables, pattern CSVs and JSON reports."""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path

import numpy as np

from .array_model import ArrayModelError, Pattern, SymmetricArray, to_db

ELEMENT_HEADER = ("index", "position_lambda", "excitation")
PATTERN_HEADER = ("u", "theta_deg", "F_linear", "F_db")


class TableError(ValueError):
    """Base class for element-table problems."""


class TableReadError(TableError, OSError):
    """The file could not be opened or read."""


class MalformedTableError(TableError):
    """The file was read but a line does not parse."""

    def __init__(self, path, lineno, reason):
        super().__init__(f"{path}:{lineno}: {reason}")
        self.path = path
        self.lineno = lineno


def fmt6(x: float) -> str:
    return f"{float(x):.6g}"


def write_element_table(array: SymmetricArray, path: str | os.PathLike) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ELEMENT_HEADER)
        for i, (d, r) in enumerate(zip(array.positions, array.excitations), start=1):
            writer.writerow([i, fmt6(d), fmt6(r)])
    return path


def read_element_table(path: str | os.PathLike) -> SymmetricArray:
    """Read a half-array table written by :func:`write_element_table`.

    Blank lines are skipped. The header line is required.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TableReadError(f"cannot read element table {path}: {exc}") from exc

    lines = text.splitlines()
    if not lines or tuple(c.strip() for c in lines[0].split(",")) != ELEMENT_HEADER:
        raise MalformedTableError(path, 1, "expected header 'index,position_lambda,excitation'")
    positions, excitations = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise MalformedTableError(path, lineno, f"expected 3 fields, got {len(parts)}")
        try:
            int(parts[0])
            d, r = float(parts[1]), float(parts[2])
        except ValueError:
            raise MalformedTableError(path, lineno, "non-numeric field") from None
        if not (math.isfinite(d) and math.isfinite(r)):
            raise MalformedTableError(path, lineno, "non-finite value")
        positions.append(d)
        excitations.append(r)
    if not positions:
        raise MalformedTableError(path, len(lines), "no element lines")
    try:
        return SymmetricArray(positions, excitations)
    except ArrayModelError as exc:
        raise MalformedTableError(path, 0, str(exc)) from None


def write_pattern_csv(pattern: Pattern, path: str | os.PathLike) -> Path:
    path = Path(path)
    db = to_db(pattern)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PATTERN_HEADER)
        for u, th, f, g in zip(pattern.grid.u_values, pattern.grid.theta_deg, pattern.values, db):
            writer.writerow([f"{u:.9g}", f"{th:.9g}", f"{f:.9g}", f"{g:.9g}"])
    return path


def round_floats(obj, digits: int = 9):
    """Recursively round floats to ``digits`` significant digits for stable JSON."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{digits}g}")
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return [round_floats(v, digits) for v in obj.tolist()]
    return obj


def dumps_report(payload: dict) -> str:
    return json.dumps(round_floats(payload), indent=2, sort_keys=True) + "\n"


def write_json(payload: dict, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.write_text(dumps_report(payload))
    return path
