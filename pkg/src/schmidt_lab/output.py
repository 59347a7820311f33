"""Deterministic file I/O: JSON summaries, CSV tables, matrix-file parsing.

All floats are written with 17 significant digits (enough to round-trip a
double exactly), keys keep insertion order, and line endings are fixed to
"\\n", so identical inputs produce byte-identical files on every platform.
No timestamps appear in data files.
"""

from __future__ import annotations

import numbers
from pathlib import Path

import numpy as np

from .errors import MatrixParseError

FLOAT_FMT = ".17g"


def fmt_float(x: float) -> str:
    """Render a finite float as a JSON/CSV-safe decimal literal."""
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x, FLOAT_FMT)


def _json_value(obj, indent: int) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{k}": {_json_value(v, indent + 2)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{_json_value(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        escaped = (
            obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        )
        return f'"{escaped}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return (
            '{"re": ' + fmt_float(c.real) + ', "im": ' + fmt_float(c.imag) + "}"
        )
    if isinstance(obj, (float, np.floating, numbers.Real)):
        return fmt_float(float(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def dump_json(obj) -> str:
    """Serialize to pretty-printed JSON with deterministic formatting."""
    return _json_value(obj, 0) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dump_json(obj), encoding="utf-8", newline="\n")


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return fmt_float(float(v))


def write_csv(path, header, rows) -> None:
    """Write a CSV table with a header row and fixed float formatting."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _parse_token(tok: str, line_no: int, col_no: int) -> complex:
    try:
        val = complex(tok)
    except ValueError:
        raise MatrixParseError(
            f"invalid matrix entry {tok!r} (expected `re` or `re+imj`)",
            line=line_no,
            column=col_no,
        ) from None
    if not (np.isfinite(val.real) and np.isfinite(val.imag)):
        raise MatrixParseError(
            f"non-finite matrix entry {tok!r}", line=line_no, column=col_no
        )
    return val


def parse_matrix_file(path) -> np.ndarray:
    """Parse a whitespace-separated complex matrix from a UTF-8 text file.

    One row per line; each entry is `re` or `re+imj` / `re-imj`.  Blank
    lines are skipped.  Errors carry 1-based line and token positions.

    Raises
    ------
    MatrixParseError
        On unreadable files, invalid tokens, ragged rows, or empty input.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixParseError(f"cannot read matrix file {path}: {exc}") from exc
    rows = []
    width = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if not toks:
            continue
        if width is None:
            width = len(toks)
        elif len(toks) != width:
            raise MatrixParseError(
                f"row has {len(toks)} entries, expected {width}",
                line=line_no,
                column=min(len(toks), width) + 1,
            )
        rows.append(
            [_parse_token(t, line_no, c) for c, t in enumerate(toks, start=1)]
        )
    if not rows:
        raise MatrixParseError("matrix file contains no rows")
    return np.array(rows, dtype=complex)
