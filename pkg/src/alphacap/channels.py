"""Built-in channels and the channel file formats.

Text format: one row per line, whitespace-separated decimals, ``#`` starts a
comment, no header. Structured format: a JSON object with ``n_in``, ``n_out``
and ``rows``.
"""

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import NegativeEntry, ParseError, UnknownBuiltin
from .simplex import ROW_TOL, make_channel

NAKAGAWA5 = [
    [0.600, 0.100, 0.100, 0.100, 0.100],
    [0.100, 0.600, 0.100, 0.100, 0.100],
    [0.231, 0.231, 0.066, 0.179, 0.292],
    [0.161, 0.341, 0.226, 0.226, 0.046],
    [0.341, 0.161, 0.226, 0.046, 0.226],
]


def _identity(n):
    return np.eye(n)


def builtin_names():
    return (["nakagawa5", "nakagawa5n"] + [f"identity{n}" for n in range(2, 9)]
            + ["bsc01", "useless3"])


def builtin_channel(name):
    """Named fixture channels.

    ``nakagawa5`` keeps its third row exactly as published (it sums to 0.999);
    ``nakagawa5n`` is the same matrix with that row renormalized.
    """
    if name == "nakagawa5":
        return make_channel(NAKAGAWA5, renormalize=False)
    if name == "nakagawa5n":
        return make_channel(NAKAGAWA5)
    if name.startswith("identity") and name[8:].isdigit() and 2 <= int(name[8:]) <= 8:
        return make_channel(_identity(int(name[8:])))
    if name == "bsc01":
        return make_channel([[0.9, 0.1], [0.1, 0.9]])
    if name == "useless3":
        return make_channel([[0.5, 0.3, 0.2]] * 3)
    raise UnknownBuiltin(f"unknown channel {name!r}; builtins: {', '.join(builtin_names())}")


def parse_text(text, row_tol=ROW_TOL, renormalize=True):
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        row = []
        for col, tok in enumerate(tokens, start=1):
            try:
                value = float(tok)
            except ValueError:
                raise ParseError(f"not a number: {tok!r}", lineno, col) from None
            if not np.isfinite(value):
                raise ParseError(f"non-finite value {tok!r}", lineno, col)
            if value < 0:
                raise NegativeEntry(f"line {lineno}, column {col}: negative entry {tok}")
            row.append(value)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row has {len(row)} entries, expected {width}", lineno)
        rows.append(row)
    if not rows:
        raise ParseError("no rows found")
    return make_channel(rows, row_tol, renormalize)


def parse_json(text, row_tol=ROW_TOL, renormalize=True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "rows" not in doc:
        raise ParseError("structured channel needs a 'rows' field")
    rows = doc["rows"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("'rows' must be a list of lists")
    n_in = doc.get("n_in", len(rows))
    if n_in != len(rows):
        raise ParseError(f"n_in={n_in} but {len(rows)} rows given")
    n_out = doc.get("n_out", len(rows[0]) if rows else 0)
    for i, r in enumerate(rows, start=1):
        if len(r) != n_out:
            raise ParseError(f"row {i} has {len(r)} entries, n_out={n_out}")
        for j, v in enumerate(r, start=1):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ParseError(f"row {i}, column {j}: not a number: {v!r}")
    return make_channel(rows, row_tol, renormalize)


def load_channel(source, row_tol=ROW_TOL, renormalize=True):
    """Load a builtin by name, or a channel file in either format."""
    path = Path(source)
    if not path.exists():
        if path.suffix or "/" in str(source):
            raise ParseError(f"no such file: {source}")
        return builtin_channel(str(source))
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return parse_json(text, row_tol, renormalize)
    return parse_text(text, row_tol, renormalize)


def format_text(channel):
    return "".join(" ".join(repr(float(v)) for v in row) + "\n" for row in channel.matrix)


def format_json(channel):
    doc = {
        "n_in": channel.n_in,
        "n_out": channel.n_out,
        "rows": [[float(v) for v in row] for row in channel.matrix],
    }
    return json.dumps(doc, indent=2) + "\n"


def export_channel(channel, path, fmt=None):
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "text")
    path.write_text(format_json(channel) if fmt == "json" else format_text(channel))


def channel_digest(channel):
    """SHA-256 over the shape and the little-endian float64 entries."""
    W = np.ascontiguousarray(channel.matrix, dtype="<f8")
    h = hashlib.sha256()
    h.update(np.array(W.shape, dtype="<i8").tobytes())
    h.update(W.tobytes())
    return h.hexdigest()
