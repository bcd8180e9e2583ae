"""Matrix files (JSON, Matrix Market, CSV) and the operation-sequence grammar.

Entry grammar, shared by every format: an integer (``-3``), a rational
literal (``7/2``) or a decimal/float literal (``0.25``, ``1e-3``).  A file
whose entries are all integers or rationals is read exactly as a
:class:`RationalMatrix`; a single decimal entry makes it a float matrix.

Operation files hold one operation per line, zero-based indices, ``#``
starts a comment::

    RS i j      swap rows i and j
    RM i c      multiply row i by c (c != 0)
    RA i j c    add c * row i to row j
    CS i j      swap columns i and j
    CM i c      multiply column i by c (c != 0)
    CA i j c    add c * column j to column i
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .numeric import RationalMatrix
from .transforms import ElemOp, OpKind, OpSequence

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")

FORMATS = ("json", "mtx", "csv")


class MatrixParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class OpParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_entry(token, line=None, column=None):
    """Parse one entry into a Fraction (exact) or a float (decimal)."""
    if isinstance(token, bool):
        raise MatrixParseError(f"invalid entry {token!r}", line, column)
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, float):
        if not math.isfinite(token):
            raise MatrixParseError(f"non-finite entry {token!r}", line, column)
        return token
    text = str(token).strip()
    if _RATIONAL.match(text):
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise MatrixParseError(f"zero denominator in entry {text!r}", line, column)
        return Fraction(int(num), int(den) if den else 1)
    if _DECIMAL.match(text):
        return float(text)
    raise MatrixParseError(f"malformed entry {text!r}", line, column)


def _build(rows: list[list]):
    if any(isinstance(x, float) for row in rows for x in row):
        return np.array([[float(x) for x in row] for row in rows], dtype=np.float64)
    return RationalMatrix(rows)


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in FORMATS:
        return suffix
    raise ValueError(f"cannot infer matrix format from {path!r}; pass one of {FORMATS}")


def parse_matrix(path, format: str | None = None):
    """Read a matrix file; returns a RationalMatrix or a float ndarray."""
    fmt = (format or detect_format(path)).lower()
    text = Path(path).read_text()
    return parse_matrix_text(text, fmt)


def parse_matrix_text(text: str, format: str):
    if format == "json":
        return _parse_json(text)
    if format == "mtx":
        return _parse_mtx(text)
    if format == "csv":
        return _parse_csv(text)
    raise ValueError(f"unknown matrix format {format!r}")


def _parse_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "entries" not in doc:
        raise MatrixParseError('expected an object with "rows", "cols" and "entries"')
    entries = doc["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise MatrixParseError('"entries" must be a list of rows')
    m = doc.get("rows", len(entries))
    n = doc.get("cols", len(entries[0]) if entries else 0)
    if m < 1 or n < 1:
        raise MatrixParseError(f"matrix must be at least 1x1, got {m}x{n}")
    if len(entries) != m:
        raise MatrixParseError(f"declared {m} rows but found {len(entries)}")
    rows = []
    for i, row in enumerate(entries):
        if len(row) != n:
            raise MatrixParseError(f"entries[{i}] has {len(row)} values, declared cols is {n}")
        out = []
        for j, tok in enumerate(row):
            try:
                out.append(parse_entry(tok))
            except MatrixParseError as exc:
                raise MatrixParseError(f"entries[{i}][{j}]: {exc}", i + 1, j + 1) from None
        rows.append(out)
    return _build(rows)


def _parse_mtx(text: str):
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise MatrixParseError("missing %%MatrixMarket header", 1)
    header = lines[0].split()
    if len(header) < 5 or header[1].lower() != "matrix":
        raise MatrixParseError("header must read '%%MatrixMarket matrix <layout> <field> general'", 1)
    layout, fld, symmetry = (h.lower() for h in header[2:5])
    if layout not in ("coordinate", "array"):
        raise MatrixParseError(f"unsupported layout {layout!r}", 1, 3)
    if fld not in ("real", "integer", "rational"):
        raise MatrixParseError(f"unsupported field {fld!r}", 1, 4)
    if symmetry != "general":
        raise MatrixParseError(f"unsupported symmetry {symmetry!r}", 1, 5)

    body = [(no, ln) for no, ln in enumerate(lines[1:], start=2) if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixParseError("missing size line", len(lines))
    size_no, size_line = body[0]
    try:
        dims = [int(t) for t in size_line.split()]
    except ValueError:
        raise MatrixParseError(f"malformed size line {size_line!r}", size_no) from None
    tokens = [(no, col, tok) for no, ln in body[1:] for col, tok in enumerate(ln.split(), start=1)]

    if layout == "array":
        if len(dims) != 2:
            raise MatrixParseError("array size line needs 'rows cols'", size_no)
        m, n = dims
        if m < 1 or n < 1:
            raise MatrixParseError(f"matrix must be at least 1x1, got {m}x{n}", size_no)
        if len(tokens) != m * n:
            raise MatrixParseError(f"expected {m * n} values, found {len(tokens)}", size_no)
        rows = [[None] * n for _ in range(m)]
        for idx, (no, col, tok) in enumerate(tokens):
            # array layout is column-major
            rows[idx % m][idx // m] = parse_entry(tok, no, col)
        return _build(rows)

    if len(dims) != 3:
        raise MatrixParseError("coordinate size line needs 'rows cols nnz'", size_no)
    m, n, nnz = dims
    if m < 1 or n < 1:
        raise MatrixParseError(f"matrix must be at least 1x1, got {m}x{n}", size_no)
    rows = [[Fraction(0)] * n for _ in range(m)]
    entry_lines = body[1:]
    if len(entry_lines) != nnz:
        raise MatrixParseError(f"declared {nnz} entries, found {len(entry_lines)}", size_no)
    for no, ln in entry_lines:
        parts = ln.split()
        if len(parts) != 3:
            raise MatrixParseError("coordinate entries need 'i j value'", no)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise MatrixParseError(f"malformed index in {ln.strip()!r}", no) from None
        if not (1 <= i <= m and 1 <= j <= n):
            raise MatrixParseError(f"index ({i}, {j}) outside {m}x{n}", no)
        rows[i - 1][j - 1] = parse_entry(parts[2], no, 3)
    return _build(rows)


def _parse_csv(text: str):
    rows = []
    for no, raw in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not raw or all(not t.strip() for t in raw) or raw[0].lstrip().startswith("#"):
            continue
        rows.append([parse_entry(tok, no, col) for col, tok in enumerate(raw, start=1)])
    if not rows:
        raise MatrixParseError("empty matrix")
    n = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != n:
            raise MatrixParseError(f"row has {len(row)} values, expected {n}", i + 1)
    return _build(rows)


def _entries(A) -> list[list[str]]:
    if isinstance(A, RationalMatrix):
        return A.to_strings()
    return [[repr(float(x)) for x in row] for row in np.asarray(A)]


def format_matrix(A, format: str) -> str:
    entries = _entries(A)
    m, n = len(entries), len(entries[0])
    if format == "json":
        return json.dumps({"rows": m, "cols": n, "entries": entries}) + "\n"
    if format == "mtx":
        fld = "rational" if isinstance(A, RationalMatrix) else "real"
        lines = [f"%%MatrixMarket matrix array {fld} general", f"{m} {n}"]
        lines += [entries[i][j] for j in range(n) for i in range(m)]
        return "\n".join(lines) + "\n"
    if format == "csv":
        return "".join(",".join(row) + "\n" for row in entries)
    raise ValueError(f"unknown matrix format {format!r}")


def write_matrix(A, path, format: str | None = None) -> None:
    Path(path).write_text(format_matrix(A, (format or detect_format(path)).lower()))


# ---------------------------------------------------------------------------
# operation files

_MNEMONICS = {k.mnemonic: k for k in OpKind}


def parse_ops_text(text: str, shape: tuple[int, int]) -> OpSequence:
    ops = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = _MNEMONICS.get(parts[0].upper())
        if kind is None:
            raise OpParseError(f"unknown operation {parts[0]!r}", no)
        arity = 3 if kind.is_add else 2
        if len(parts) - 1 != arity:
            raise OpParseError(f"{parts[0]} takes {arity} arguments, got {len(parts) - 1}", no)
        n_idx = 1 if kind.is_mult else 2
        try:
            idx = [int(t) for t in parts[1 : 1 + n_idx]]
        except ValueError:
            raise OpParseError(f"indices must be integers in {line!r}", no) from None
        c = None
        if not kind.is_switch:
            tok = parts[-1]
            if not _RATIONAL.match(tok):
                raise OpParseError(f"coefficient {tok!r} is not an integer or p/q literal", no)
            try:
                c = Fraction(tok)
            except ZeroDivisionError:
                raise OpParseError(f"zero denominator in {tok!r}", no) from None
        try:
            op = ElemOp(kind, idx[0], idx[1] if n_idx == 2 else None, c)
            op.check_shape(shape)
        except (ValueError, IndexError) as exc:
            raise OpParseError(str(exc), no) from None
        ops.append(op)
    return OpSequence(tuple(ops), shape)


def parse_ops(path, shape: tuple[int, int]) -> OpSequence:
    return parse_ops_text(Path(path).read_text(), shape)
