"""CSV signal files (``n,value``) and JSON reports."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DuplicateIndex, ParseError
from .grid import ZERO, Extension, Grid, GridFunction

__all__ = ["SignalInfo", "dump_report", "format_signal", "make_report", "parse_signal", "write_signal"]

HEADER = ("n", "value")


@dataclass(frozen=True)
class SignalInfo:
    """What :func:`parse_signal` had to repair: indices absent from the file and set to zero."""

    zero_filled: tuple[int, ...] = ()


def _parse_rows(text: str, header: tuple[str, ...]):
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows or tuple(c.strip() for c in rows[0]) != header:
        raise ParseError(f"expected header {','.join(header)!r}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ParseError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            n = int(row[0].strip())
            value = float(row[1].strip())
        except ValueError:
            raise ParseError(f"line {lineno}: malformed row {row!r}") from None
        if not math.isfinite(value):
            raise ParseError(f"line {lineno}: non-finite value {row[1].strip()!r}")
        if out:
            prev = out[-1][0]
            if n == prev:
                raise DuplicateIndex(f"line {lineno}: index {n} repeated")
            if n < prev:
                raise ParseError(f"line {lineno}: index {n} after {prev}; indices must increase")
        out.append((n, value))
    if not out:
        raise ParseError("no data rows")
    return out


def parse_signal(
    path,
    h: float = 1.0,
    extension: Extension = ZERO,
    return_info: bool = False,
):
    """Read a ``n,value`` CSV into a :class:`GridFunction` on ``[min n, max n]``.

    Indices missing inside the range are set to zero with a warning; with
    ``return_info`` the function also returns a :class:`SignalInfo` listing them.

    Examples
    --------
    A file holding the single row ``0,1`` parses to the unit impulse at 0.
    """
    rows = _parse_rows(Path(path).read_text(), HEADER)
    idx = np.array([n for n, _ in rows])
    grid = Grid(h, int(idx[0]), int(idx[-1]))
    samples = np.zeros(grid.size)
    samples[idx - grid.n_min] = [v for _, v in rows]
    present = np.zeros(grid.size, bool)
    present[idx - grid.n_min] = True
    missing = tuple(int(n) for n in grid.indices[~present])
    if missing:
        warnings.warn(f"{len(missing)} missing indices filled with zero", stacklevel=2)
    u = GridFunction(grid, samples, extension, extension)
    return (u, SignalInfo(missing)) if return_info else u


def format_signal(u: GridFunction, header: tuple[str, str] = HEADER, skip=()) -> str:
    """CSV text for the valid samples of ``u``; indices in ``skip`` are left out."""
    skip = set(skip)
    lines = [",".join(header)]
    for n, value, ok in zip(u.grid.indices, u.samples, u.valid_mask):
        if ok and int(n) not in skip:
            lines.append(f"{int(n)},{float(value)!r}")
    return "\n".join(lines) + "\n"


def write_signal(u: GridFunction, path=None, header: tuple[str, str] = HEADER, skip=()) -> str:
    text = format_signal(u, header, skip)
    if path is not None and str(path) != "-":
        Path(path).write_text(text)
    return text


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def make_report(command: str, parameters: dict, results, tolerances: dict, flags: dict) -> dict:
    """The report layout shared by every command."""
    return _jsonable(
        {
            "command": command,
            "parameters": parameters,
            "results": results,
            "tolerances": tolerances,
            "flags": flags,
        }
    )


def dump_report(report: dict, path=None) -> str:
    # json writes floats with repr, which round-trips exactly
    text = json.dumps(report, indent=2, allow_nan=False)
    if path is not None and str(path) != "-":
        Path(path).write_text(text + "\n")
    return text
