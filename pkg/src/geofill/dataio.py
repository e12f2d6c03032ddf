"""Reading and writing the delimited point format and ESRI ASCII grids.

The point format is plain delimited text with columns x, y, value.  The
delimiter (comma, tab, or runs of spaces) is detected from the first
non-blank line, and a leading header line is recognised by its first field
not being a number.  Values are written with ``repr`` so that parsing a
written file reproduces the original floats bit for bit.
"""

from __future__ import annotations

import math
from typing import Iterator, TextIO

import numpy as np

from .errors import (
    CountMismatchError,
    DuplicatePointError,
    EmptyInputError,
    HeaderMissingFieldError,
    ParseError,
)
from .model import SampleSet

__all__ = [
    "parse_ascii_grid",
    "parse_targets",
    "parse_xyz",
    "write_imputed",
    "write_xyz",
    "write_xyz_arrays",
]


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def _split_line(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        return line.split()
    return [field.strip() for field in line.split(delimiter)]


def _iter_rows(stream: TextIO) -> Iterator[tuple[int, list[str]]]:
    """Yield (1-based line number, fields) for every data row.

    The delimiter comes from the first non-blank line: comma if present,
    else tab, else whitespace runs.  If that line's first field is not
    numeric it is treated as a header and skipped.
    """
    delimiter: str | None = None
    saw_first = False
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if not saw_first:
            saw_first = True
            delimiter = "," if "," in line else ("\t" if "\t" in line else None)
            fields = _split_line(line, delimiter)
            if not fields or not _is_number(fields[0]):
                continue
        else:
            fields = _split_line(line, delimiter)
        yield line_no, fields


def _parse_row(fields: list[str], line_no: int, expect: int) -> list[float]:
    if len(fields) != expect:
        raise ParseError(
            f"expected {expect} fields, got {len(fields)}", line=line_no
        )
    row = []
    for col, field in enumerate(fields, start=1):
        try:
            value = float(field)
        except ValueError:
            raise ParseError(
                f"could not parse {field!r} as a number", line=line_no, column=col
            ) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite value {field!r}", line=line_no, column=col)
        row.append(value)
    return row


def _first_duplicate_pair(xs: np.ndarray, ys: np.ndarray) -> tuple[int, int] | None:
    """Indices (earlier, later) of the first coincident coordinate pair, if any."""
    order = np.lexsort((ys, xs))
    same = (xs[order[1:]] == xs[order[:-1]]) & (ys[order[1:]] == ys[order[:-1]])
    hits = np.nonzero(same)[0]
    if hits.size == 0:
        return None
    t = int(hits[0])
    i, j = int(order[t]), int(order[t + 1])
    return (i, j) if i < j else (j, i)


def parse_xyz(stream: TextIO, dedupe: str = "reject") -> SampleSet:
    """Parse x, y, value rows into a SampleSet.

    ``dedupe`` controls coincident coordinates: ``"reject"`` (default)
    raises :class:`~geofill.errors.DuplicatePointError` with the offending
    line numbers; ``"mean"`` averages the values at each repeated
    coordinate, keeping first-appearance order.
    """
    if dedupe not in ("reject", "mean"):
        raise ValueError(f'dedupe must be "reject" or "mean", got {dedupe!r}')
    xs: list[float] = []
    ys: list[float] = []
    values: list[float] = []
    line_numbers: list[int] = []
    for line_no, fields in _iter_rows(stream):
        x, y, value = _parse_row(fields, line_no, 3)
        xs.append(x)
        ys.append(y)
        values.append(value)
        line_numbers.append(line_no)
    if not xs:
        raise EmptyInputError("no data rows found")
    axs = np.array(xs, dtype=np.float64)
    ays = np.array(ys, dtype=np.float64)
    avs = np.array(values, dtype=np.float64)
    pair = _first_duplicate_pair(axs, ays)
    if pair is not None:
        if dedupe == "reject":
            i, j = pair
            raise DuplicatePointError(
                f"duplicate coordinates ({axs[i]!r}, {ays[i]!r}) at line "
                f"{line_numbers[j]} (first seen at line {line_numbers[i]})",
                first_line=line_numbers[i],
                duplicate_line=line_numbers[j],
            )
        coords = np.column_stack((axs, ays))
        uniq, first_idx, inverse = np.unique(
            coords, axis=0, return_index=True, return_inverse=True
        )
        sums = np.bincount(inverse, weights=avs)
        counts = np.bincount(inverse)
        order = np.argsort(first_idx, kind="stable")
        axs = uniq[order, 0]
        ays = uniq[order, 1]
        avs = (sums / counts)[order]
    return SampleSet(axs, ays, avs)


def parse_targets(stream: TextIO) -> np.ndarray:
    """Parse query locations (2 columns, or 3 with the value column ignored).

    Returns an (m, 2) coordinate array in file order; repeats are allowed.
    """
    coords: list[tuple[float, float]] = []
    for line_no, fields in _iter_rows(stream):
        if len(fields) not in (2, 3):
            raise ParseError(
                f"expected 2 or 3 fields, got {len(fields)}", line=line_no
            )
        row = _parse_row(fields[:2], line_no, 2)
        coords.append((row[0], row[1]))
    if not coords:
        raise EmptyInputError("no target rows found")
    return np.array(coords, dtype=np.float64)


def write_xyz_arrays(stream: TextIO, xs, ys, values, header=("x", "y", "value")) -> None:
    """Write parallel coordinate/value arrays as comma-delimited rows.

    Floats are serialised with ``repr`` so a read-back reproduces them
    exactly.
    """
    stream.write(",".join(header) + "\n")
    for x, y, v in zip(
        np.asarray(xs).tolist(), np.asarray(ys).tolist(), np.asarray(values).tolist()
    ):
        stream.write(f"{x!r},{y!r},{v!r}\n")


def write_xyz(samples: SampleSet, stream: TextIO) -> None:
    """Write a SampleSet in the same format parse_xyz reads (exact round-trip)."""
    write_xyz_arrays(stream, samples.xs, samples.ys, samples.values)


def write_imputed(stream: TextIO, xs, ys, values, mu, parameter) -> None:
    """Write imputation results with per-point diagnostics.

    Columns: x, y, value, mu (density membership), param (shape factor or
    IDW exponent).  Diagnostics are NaN where not applicable — snapped
    queries and the kNN estimator.
    """
    stream.write("x,y,value,mu,param\n")
    for x, y, v, m, p in zip(
        np.asarray(xs).tolist(),
        np.asarray(ys).tolist(),
        np.asarray(values).tolist(),
        np.asarray(mu).tolist(),
        np.asarray(parameter).tolist(),
    ):
        stream.write(f"{x!r},{y!r},{v!r},{m!r},{p!r}\n")


_GRID_ALTERNATES = {"xllcorner": "xllcenter", "yllcorner": "yllcenter"}
_GRID_KEYS = frozenset(
    ["ncols", "nrows", "xllcorner", "yllcorner", "xllcenter", "yllcenter", "cellsize", "nodata_value"]
)


def parse_ascii_grid(stream: TextIO) -> tuple[SampleSet, np.ndarray]:
    """Parse an ESRI ASCII grid into samples plus the NODATA cell centres.

    Header keys are case-insensitive; ``xllcenter``/``yllcenter`` are
    accepted in place of the corner form with the half-cell adjustment.
    Every non-NODATA cell becomes one sample at its cell centre (rows run
    north to south in the file).  Returns ``(samples, queries)`` where
    ``queries`` is an (m, 2) array of the NODATA cell centres in row-major
    file order — the natural "missing" set.
    """
    header: dict[str, float] = {}
    cells: list[float] = []
    in_header = True
    for line_no, raw in enumerate(stream, start=1):
        tokens = raw.split()
        if not tokens:
            continue
        first = tokens[0].lower()
        if in_header and not _is_number(first):
            if first not in _GRID_KEYS:
                raise ParseError(f"unknown header field {tokens[0]!r}", line=line_no)
            if len(tokens) != 2:
                raise ParseError(
                    f"header line must be 'key value', got {len(tokens)} tokens",
                    line=line_no,
                )
            if not _is_number(tokens[1]):
                raise ParseError(
                    f"could not parse {tokens[1]!r} as a number", line=line_no, column=2
                )
            header[first] = float(tokens[1])
            continue
        in_header = False
        for col, token in enumerate(tokens, start=1):
            try:
                cells.append(float(token))
            except ValueError:
                raise ParseError(
                    f"could not parse {token!r} as a number", line=line_no, column=col
                ) from None

    def require(key: str) -> float:
        if key in header:
            return header[key]
        alternate = _GRID_ALTERNATES.get(key)
        if alternate is not None and alternate in header:
            if "cellsize" not in header:
                raise HeaderMissingFieldError("missing required header field 'cellsize'")
            return header[alternate] - header["cellsize"] / 2.0
        raise HeaderMissingFieldError(f"missing required header field {key!r}")

    def require_int(key: str) -> int:
        value = require(key)
        if value != int(value) or value < 1:
            raise ParseError(f"header field {key!r} must be a positive integer, got {value}")
        return int(value)

    ncols = require_int("ncols")
    nrows = require_int("nrows")
    cellsize = require("cellsize")
    if not cellsize > 0:
        raise ParseError(f"cellsize must be positive, got {cellsize}")
    xll = require("xllcorner")
    yll = require("yllcorner")
    nodata = require("nodata_value")
    expected = ncols * nrows
    if len(cells) != expected:
        raise CountMismatchError(
            f"grid declares {nrows}x{ncols} = {expected} cells but contains {len(cells)} values"
        )
    grid = np.array(cells, dtype=np.float64).reshape(nrows, ncols)
    x_centers = xll + (np.arange(ncols) + 0.5) * cellsize
    y_centers = yll + (nrows - np.arange(nrows) - 0.5) * cellsize
    X, Y = np.meshgrid(x_centers, y_centers)
    known = grid != nodata
    samples = SampleSet(X[known], Y[known], grid[known])
    queries = np.column_stack((X[~known], Y[~known]))
    return samples, queries
