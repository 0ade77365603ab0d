"""Matrix file formats.

Matrix JSON::

    {"rows": n, "cols": m, "field": "real" | "complex", "data": [[...], ...]}

Complex entries are ``[re, im]`` pairs. Floats are written with Python's
shortest round-trip ``repr``, so every binary64 value survives a round trip
bit for bit. Plain CSV files of real numbers are accepted as input too.
"""
import json
import math
import os

import numpy as np

from .errors import InputError

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "read_matrix",
    "write_json",
    "read_json",
]


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"non-finite entry {x!r} cannot be stored")
    return x


def matrix_to_json(M):
    """Matrix JSON object for a 2-D array.

    Examples
    --------
    >>> matrix_to_json(np.eye(1))
    {'rows': 1, 'cols': 1, 'field': 'real', 'data': [[1.0]]}
    """
    M = np.asarray(M)
    if M.ndim != 2:
        raise InputError(f"expected a 2-D matrix, got shape {M.shape}")
    cplx = np.iscomplexobj(M)
    if cplx:
        data = [[[_num(z.real), _num(z.imag)] for z in row] for row in M]
    else:
        data = [[_num(x) for x in row] for row in M]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "field": "complex" if cplx else "real", "data": data}


def _entry(v, cplx, where):
    if cplx:
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return complex(_real(v[0], where), _real(v[1], where))
        return complex(_real(v, where), 0.0)
    if isinstance(v, (list, tuple)):
        raise InputError(f"complex entry at {where} in a real matrix")
    return _real(v, where)


def _real(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"entry at {where} is not a number: {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise InputError(f"entry at {where} is not finite")
    return v


def matrix_from_json(obj):
    """Parse a Matrix JSON object into an ndarray (float or complex).

    Raises
    ------
    InputError
        On missing keys, wrong shapes or non-numeric entries.
    """
    if not isinstance(obj, dict):
        raise InputError("matrix JSON must be an object")
    missing = [k for k in ("rows", "cols", "data") if k not in obj]
    if missing:
        raise InputError(f"matrix JSON is missing keys {missing}")
    field = obj.get("field", "real")
    if field not in ("real", "complex"):
        raise InputError(f"field must be 'real' or 'complex', got {field!r}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not isinstance(data, list) or len(data) != rows:
        raise InputError(f"expected {rows} rows of data")
    cplx = field == "complex"
    out = np.zeros((rows, cols), dtype=complex if cplx else float)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"row {i} must have {cols} entries")
        for j, v in enumerate(row):
            out[i, j] = _entry(v, cplx, (i, j))
    return out


def _read_csv(text, path):
    rows = []
    for k, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError:
            raise InputError(f"{path}: line {k + 1} is not a row of numbers") from None
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise InputError(f"{path}: CSV rows must be non-empty and of equal length")
    M = np.array(rows)
    if not np.all(np.isfinite(M)):
        raise InputError(f"{path}: non-finite entries")
    return M


def read_matrix(path):
    """Read a matrix from Matrix JSON or CSV (chosen by extension, ``.csv`` for CSV)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if os.path.splitext(path)[1].lower() == ".csv":
        return _read_csv(text, path)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return matrix_from_json(obj)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def write_json(obj, path=None):
    """Serialise ``obj`` (2-space indent); return the text and write it if ``path`` is given."""
    text = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
