"""Column-typed, immutable view of a CSV file.

The engine never mutates data after load.  A :class:`Dataset` is a bag of
named columns; each column is either numeric (floats, with ``None`` for
missing) or categorical (strings, with ``None`` for missing).  Type
inference is all-or-nothing per column: a single unparsable non-missing
field makes the whole column categorical.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

from .errors import DatasetError, UnknownColumnError

#: Field values (case-insensitive, no stripping) treated as missing.
MISSING_TOKENS = frozenset({"", "na", "nan"})

# Decimal literal with optional sign and exponent.  Deliberately excludes
# inf/nan spellings: those should stay categorical text if they appear.
_NUMERIC_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


def is_missing(field: str) -> bool:
    return field.lower() in MISSING_TOKENS


def parse_numeric(field: str) -> float | None:
    """Return the float value of *field*, or None if it is not numeric."""
    if _NUMERIC_RE.fullmatch(field) is None:
        return None
    return float(field)


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # "numeric" | "categorical"
    values: tuple  # floats or strings, None for missing

    def __post_init__(self):
        if self.kind not in ("numeric", "categorical"):
            raise DatasetError(f"bad column kind {self.kind!r}")


@dataclass(frozen=True)
class Dataset:
    columns: tuple  # of Column, in file order
    row_count: int

    @property
    def column_names(self) -> tuple:
        return tuple(c.name for c in self.columns)

    def __contains__(self, name) -> bool:
        return any(c.name == name for c in self.columns)


def column(ds: Dataset, name: str) -> Column:
    for col in ds.columns:
        if col.name == name:
            return col
    raise UnknownColumnError(name, ds.column_names)


def _infer_column(name, fields):
    parsed = []
    numeric = True
    for field in fields:
        if is_missing(field):
            parsed.append(None)
            continue
        value = parse_numeric(field)
        if value is None:
            numeric = False
            break
        parsed.append(value)
    if numeric:
        return Column(name, "numeric", tuple(parsed))
    return Column(
        name,
        "categorical",
        tuple(None if is_missing(f) else f for f in fields),
    )


def _coerce_column(name, fields, kind, path):
    if kind == "categorical":
        return Column(name, kind, tuple(None if is_missing(f) else f for f in fields))
    if kind != "numeric":
        raise DatasetError(f"schema for {name!r} names unknown kind {kind!r}")
    parsed = []
    for row_num, field in enumerate(fields, start=2):
        if is_missing(field):
            parsed.append(None)
            continue
        value = parse_numeric(field)
        if value is None:
            raise DatasetError(
                f"{path}: column {name!r} is declared numeric but row "
                f"{row_num} holds {field!r}"
            )
        parsed.append(value)
    return Column(name, kind, tuple(parsed))


def load_csv(path: str, schema: dict | None = None) -> Dataset:
    """Load a CSV file into a Dataset.

    *schema*, when given, maps column names to "numeric"/"categorical" and
    overrides inference for those columns.  Naming a column that is not in
    the file is an error (it usually means a typo in the caller).
    """
    try:
        fh = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise DatasetError(f"cannot read {path!r}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: file is empty (no header row)") from None
        if any(name == "" for name in header):
            raise DatasetError(f"{path}: header has an empty column name")
        if len(set(header)) != len(header):
            dupes = sorted({n for n in header if header.count(n) > 1})
            raise DatasetError(f"{path}: duplicate column names {dupes}")
        raw_columns = [[] for _ in header]
        row_count = 0
        for row in reader:
            if len(row) != len(header):
                raise DatasetError(
                    f"{path}: row at line {reader.line_num} has {len(row)} "
                    f"fields, expected {len(header)}"
                )
            for cell, bucket in zip(row, raw_columns):
                bucket.append(cell)
            row_count += 1

    if schema:
        for name in schema:
            if name not in header:
                raise DatasetError(
                    f"{path}: schema names column {name!r} which is not in the file"
                )

    columns = []
    for name, fields in zip(header, raw_columns):
        if schema and name in schema:
            columns.append(_coerce_column(name, fields, schema[name], path))
        else:
            columns.append(_infer_column(name, fields))
    return Dataset(tuple(columns), row_count)


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return str(value)


def write_csv(ds: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ds.column_names)
        for i in range(ds.row_count):
            writer.writerow([_format_field(c.values[i]) for c in ds.columns])
