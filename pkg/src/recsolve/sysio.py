"""Parsing linear systems from files and serializing solve reports.

Matrix formats
--------------
Matrix Market, header ``%%MatrixMarket matrix <coordinate|array>
<real|complex> <general|symmetric|hermitian>``:

* ``coordinate``: a ``rows cols nnz`` size line, then one entry per line,
  1-based ``i j value`` (``i j re im`` for complex). Unspecified entries are
  zero. Duplicate coordinates are an error, not a sum.
* ``array``: a ``rows cols`` size line, then dense values one per line in
  column-major order (``re im`` per line for complex); symmetric/hermitian
  files store the lower triangle per column and are expanded on read.

Dense whitespace text: a first line ``m n`` followed by m rows of n values;
rows of n+1 values embed the right-hand side as the final column. Real
field only.

Right-hand sides come from a plain text column (one value per line; two
whitespace-separated values per line are read as re/im) or from the
embedded final column.

``%`` lines and blank lines are comments everywhere. All diagnostics carry
the offending file and 1-based line number.

Reports are single JSON objects; complex vectors are encoded as
``[[re, im], ...]`` pairs. Floats survive the round trip exactly (shortest
repr).
"""
from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

from .linop import DimensionMismatch
from .sampling import DistributionSpec
from .scalars import COMPLEX, REAL, is_complex_dtype
from .solver import SolveReport, SolverConfig

REPORT_FORMAT = "recsolve-report/1"


class SystemFormatError(ValueError):
    """Malformed system file; carries path and 1-based line number."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = f"{path}:" if path is not None else ""
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


def _data_lines(path):
    """Yield (line_number, stripped_text) skipping comments and blanks."""
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("%"):
                continue
            yield lineno, text


def _parse_number(token: str, path, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise SystemFormatError(f"non-numeric token {token!r}", path, lineno) from None


def _parse_index(token: str, path, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise SystemFormatError(f"non-integer index {token!r}", path, lineno) from None


def _parse_mm_header(first: str, path, lineno: int):
    parts = first.split()
    if len(parts) != 5 or parts[0] != "%%MatrixMarket":
        raise SystemFormatError(f"malformed MatrixMarket header {first!r}", path, lineno)
    _, obj, fmt, field, symmetry = (p.lower() for p in parts)
    if obj != "matrix":
        raise SystemFormatError(f"unsupported MatrixMarket object {obj!r}", path, lineno)
    if fmt not in ("coordinate", "array"):
        raise SystemFormatError(f"unsupported MatrixMarket format {fmt!r}", path, lineno)
    if field not in ("real", "complex"):
        raise SystemFormatError(f"unsupported MatrixMarket field {field!r}", path, lineno)
    if symmetry not in ("general", "symmetric", "hermitian"):
        raise SystemFormatError(f"unsupported MatrixMarket symmetry {symmetry!r}", path, lineno)
    return fmt, field, symmetry


def _read_mm_value(tokens, is_complex, path, lineno):
    want = 2 if is_complex else 1
    if len(tokens) != want:
        raise SystemFormatError(
            f"expected {want} value token(s), got {len(tokens)}", path, lineno)
    if is_complex:
        return complex(_parse_number(tokens[0], path, lineno),
                       _parse_number(tokens[1], path, lineno))
    return _parse_number(tokens[0], path, lineno)


def parse_matrix_market(path) -> np.ndarray:
    """Dense matrix from a Matrix Market file (symmetry expanded on read)."""
    with open(path, "r") as fh:
        first = fh.readline()
    fmt, field, symmetry = _parse_mm_header(first.strip(), path, 1)
    is_complex = field == "complex"
    dtype = COMPLEX if is_complex else REAL

    lines = _data_lines(path)
    try:
        size_lineno, size_text = next(lines)
    except StopIteration:
        raise SystemFormatError("missing size line", path) from None
    size_tokens = size_text.split()

    if fmt == "coordinate":
        if len(size_tokens) != 3:
            raise SystemFormatError(
                f"coordinate size line needs 'rows cols nnz', got {size_text!r}",
                path, size_lineno)
        m, n, nnz = (_parse_index(t, path, size_lineno) for t in size_tokens)
        if m < 1 or n < 1 or nnz < 0:
            raise SystemFormatError("invalid dimensions", path, size_lineno)
        out = np.zeros((m, n), dtype=dtype)
        seen = np.zeros((m, n), dtype=bool)
        count = 0
        for lineno, text in lines:
            tokens = text.split()
            if len(tokens) < 3:
                raise SystemFormatError(f"short coordinate entry {text!r}", path, lineno)
            i = _parse_index(tokens[0], path, lineno)
            j = _parse_index(tokens[1], path, lineno)
            if not (1 <= i <= m and 1 <= j <= n):
                raise SystemFormatError(
                    f"entry index ({i}, {j}) outside declared {m}x{n} matrix", path, lineno)
            value = _read_mm_value(tokens[2:], is_complex, path, lineno)
            if seen[i - 1, j - 1]:
                raise SystemFormatError(f"duplicate entry for ({i}, {j})", path, lineno)
            seen[i - 1, j - 1] = True
            out[i - 1, j - 1] = value
            if symmetry != "general" and i != j:
                if seen[j - 1, i - 1]:
                    raise SystemFormatError(
                        f"duplicate entry for ({j}, {i}) via symmetry", path, lineno)
                seen[j - 1, i - 1] = True
                out[j - 1, i - 1] = np.conj(value) if symmetry == "hermitian" else value
            count += 1
        if count != nnz:
            raise SystemFormatError(f"declared {nnz} entries, found {count}", path)
        return out

    # array format: values in column-major order
    if len(size_tokens) != 2:
        raise SystemFormatError(
            f"array size line needs 'rows cols', got {size_text!r}", path, size_lineno)
    m, n = (_parse_index(t, path, size_lineno) for t in size_tokens)
    if m < 1 or n < 1:
        raise SystemFormatError("invalid dimensions", path, size_lineno)
    if symmetry != "general" and m != n:
        raise SystemFormatError("symmetric array file must be square", path, size_lineno)
    out = np.zeros((m, n), dtype=dtype)
    if symmetry == "general":
        slots = [(i, j) for j in range(n) for i in range(m)]
    else:
        slots = [(i, j) for j in range(n) for i in range(j, m)]
    filled = 0
    for lineno, text in lines:
        if filled >= len(slots):
            raise SystemFormatError("more values than the declared size", path, lineno)
        i, j = slots[filled]
        value = _read_mm_value(text.split(), is_complex, path, lineno)
        out[i, j] = value
        if symmetry != "general" and i != j:
            out[j, i] = np.conj(value) if symmetry == "hermitian" else value
        filled += 1
    if filled != len(slots):
        raise SystemFormatError(
            f"expected {len(slots)} values, found {filled}", path)
    return out


def parse_dense_text(path):
    """(matrix, embedded_rhs_or_None) from whitespace dense text."""
    lines = _data_lines(path)
    try:
        size_lineno, size_text = next(lines)
    except StopIteration:
        raise SystemFormatError("empty matrix file", path) from None
    tokens = size_text.split()
    if len(tokens) != 2:
        raise SystemFormatError(
            f"first line must be 'rows cols', got {size_text!r}", path, size_lineno)
    m, n = (_parse_index(t, path, size_lineno) for t in tokens)
    if m < 1 or n < 1:
        raise SystemFormatError("invalid dimensions", path, size_lineno)
    rows = []
    embedded = None
    for lineno, text in lines:
        values = [_parse_number(t, path, lineno) for t in text.split()]
        if len(rows) == 0 and len(values) == n + 1:
            embedded = []
        want = n + 1 if embedded is not None else n
        if len(values) != want:
            raise SystemFormatError(
                f"row has {len(values)} values, expected {want}", path, lineno)
        if embedded is not None:
            embedded.append(values[-1])
            values = values[:-1]
        rows.append(values)
        if len(rows) > m:
            raise SystemFormatError(f"more than the declared {m} rows", path, lineno)
    if len(rows) != m:
        raise SystemFormatError(f"declared {m} rows, found {len(rows)}", path)
    matrix = np.asarray(rows, dtype=REAL)
    rhs = np.asarray(embedded, dtype=REAL) if embedded is not None else None
    return matrix, rhs


def parse_rhs_text(path) -> np.ndarray:
    """Right-hand side column; two tokens per line are read as re/im."""
    values = []
    is_complex = False
    for lineno, text in _data_lines(path):
        tokens = text.split()
        if len(tokens) == 1:
            values.append(_parse_number(tokens[0], path, lineno))
        elif len(tokens) == 2:
            is_complex = True
            values.append(complex(_parse_number(tokens[0], path, lineno),
                                  _parse_number(tokens[1], path, lineno)))
        else:
            raise SystemFormatError(
                f"right-hand side line has {len(tokens)} tokens, expected 1 or 2",
                path, lineno)
    if not values:
        raise SystemFormatError("empty right-hand side file", path)
    return np.asarray(values, dtype=COMPLEX if is_complex else REAL)


def _is_matrix_market(path) -> bool:
    with open(path, "r") as fh:
        return fh.readline().lstrip().startswith("%%MatrixMarket")


def parse_system(matrix_path, rhs_path=None):
    """(dense matrix, rhs) from files; see the module docstring for formats."""
    if _is_matrix_market(matrix_path):
        matrix = parse_matrix_market(matrix_path)
        embedded = None
    else:
        matrix, embedded = parse_dense_text(matrix_path)
    if rhs_path is not None:
        if embedded is not None:
            raise SystemFormatError(
                "matrix file embeds a right-hand side column; separate rhs not allowed",
                matrix_path)
        rhs = parse_rhs_text(rhs_path)
    elif embedded is not None:
        rhs = embedded
    else:
        raise SystemFormatError("no right-hand side: pass a rhs file", matrix_path)
    if rhs.shape[0] != matrix.shape[0]:
        raise DimensionMismatch(
            f"matrix has {matrix.shape[0]} rows but right-hand side has {rhs.shape[0]} entries")
    if is_complex_dtype(matrix.dtype) and not is_complex_dtype(rhs.dtype):
        rhs = rhs.astype(COMPLEX)
    if is_complex_dtype(rhs.dtype) and not is_complex_dtype(matrix.dtype):
        matrix = matrix.astype(COMPLEX)
    return matrix, rhs


def write_system_dense(path, matrix, rhs=None) -> None:
    """Dense text writer (real field); embeds rhs as the final column."""
    matrix = np.asarray(matrix)
    m, n = matrix.shape
    with open(path, "w") as fh:
        fh.write(f"{m} {n}\n")
        for i in range(m):
            row = [repr(float(v)) for v in matrix[i]]
            if rhs is not None:
                row.append(repr(float(rhs[i])))
            fh.write(" ".join(row) + "\n")


# Report serialization -------------------------------------------------------

def encode_vector(v) -> list:
    v = np.asarray(v)
    if is_complex_dtype(v.dtype):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(x) for x in v]


def decode_vector(obj, field: str) -> np.ndarray:
    if field == "complex":
        return np.asarray([complex(re, im) for re, im in obj], dtype=COMPLEX)
    return np.asarray(obj, dtype=REAL)


def _distribution_to_dict(spec: DistributionSpec | None):
    if spec is None:
        return None
    d = asdict(spec)
    d["dtype"] = "complex" if spec.is_complex else "real"
    return d


def config_to_dict(config: SolverConfig) -> dict:
    return {
        "distribution": _distribution_to_dict(config.distribution),
        "seed": config.seed,
        "L": config.L,
        "rec_tol": config.rec_tol,
        "guard": config.guard,
        "degeneracy_dist_threshold": config.degeneracy_dist_threshold,
        "respread_c": config.respread_c,
        "reduced_updates": config.reduced_updates,
        "workers": config.workers,
        "max_retries_per_step": config.max_retries_per_step,
        "backend": config.backend,
        "pair_strategy": config.pair_strategy,
    }


def report_to_dict(report: SolveReport, include_iterates: bool = False) -> dict:
    vectors = report.iterates.vectors
    field = "complex" if is_complex_dtype(vectors.dtype) else "real"
    out = {
        "format": REPORT_FORMAT,
        "status": report.status,
        "completed_steps": report.completed_steps,
        "rows": report.rows,
        "cols": report.cols,
        "field": field,
        "max_residual": report.max_residual,
        "feas_tol": report.feas_tolerance,
        "flops": report.flops.as_dict(),
        "wall_time_ns": report.wall_time_ns,
        "retries_used": report.retries_used,
        "seed": report.seed,
        "backend": report.backend,
        "config": config_to_dict(report.config),
        "solution": encode_vector(vectors[0]),
    }
    if include_iterates:
        out["iterates"] = [encode_vector(v) for v in vectors]
    return out


def write_report(report: SolveReport, path, include_iterates: bool = False) -> None:
    """One JSON object per run; see :func:`report_to_dict` for the schema."""
    with open(path, "w") as fh:
        json.dump(report_to_dict(report, include_iterates), fh, indent=2)
        fh.write("\n")


def read_report(path) -> dict:
    """Parsed report with 'solution' (and 'iterates') decoded to arrays."""
    with open(path, "r") as fh:
        data = json.load(fh)
    if data.get("format") != REPORT_FORMAT:
        raise SystemFormatError(f"not a {REPORT_FORMAT} report", path)
    field = data.get("field", "real")
    data["solution"] = decode_vector(data["solution"], field)
    if "iterates" in data:
        data["iterates"] = [decode_vector(v, field) for v in data["iterates"]]
    return data
