"""Cross tabulation and pivot tables with per-cell contributor tracking.

Every cell keeps the list of individual contributions that went into it,
because the disclosure rules in :mod:`sdckit.rules` need them: the
frequency rule looks at contributor counts, the dominance rules at the
magnitudes themselves.

Aggregation is order-independent by construction: sums use ``math.fsum``
(exact), the median sorts, and the variance is two-pass with exact sums.
Shuffling the input rows can therefore never change a released value.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .errors import (
    EmptyTableError,
    ProhibitionError,
    TableError,
    TypeMismatchError,
)
from .dataset import Dataset, column

#: Aggregations whose cell values depend on contribution magnitudes.
#: These get the dominance checks on top of the frequency check.
MAGNITUDE_AGGS = ("sum", "mean", "median", "std", "var")

#: Aggregations that are never released: a subgroup minimum or maximum is
#: a single respondent's exact value, so no threshold can make it safe.
PROHIBITED_AGGS = ("min", "max")

#: Label used for margin rows/columns.
MARGIN_LABEL = "All"


@dataclass(frozen=True)
class TableSpec:
    """A validated tabulation request."""

    index_vars: tuple
    column_vars: tuple = ()
    values_var: str | None = None
    aggfunc: str = "count"
    margins: bool = False

    def __post_init__(self):
        if self.aggfunc in PROHIBITED_AGGS:
            raise ProhibitionError(
                f"aggfunc {self.aggfunc!r} is not allowed: subgroup minima and "
                "maxima are single respondents' values and are never released"
            )
        if self.aggfunc != "count" and self.aggfunc not in MAGNITUDE_AGGS:
            raise TableError(f"unknown aggfunc {self.aggfunc!r}")
        if not self.index_vars:
            raise TableError("at least one index variable is required")
        if self.aggfunc != "count" and self.values_var is None:
            raise TableError(f"aggfunc {self.aggfunc!r} needs a values column")
        overlap = set(self.index_vars) & set(self.column_vars)
        if overlap:
            raise TableError(
                f"variables {sorted(overlap)} appear on both axes"
            )


def _as_tuple(arg) -> tuple:
    if arg is None:
        return ()
    if isinstance(arg, str):
        return (arg,)
    return tuple(arg)


def build_spec(
    index,
    columns=(),
    values=None,
    aggfunc="count",
    margins=False,
    ds: Dataset | None = None,
) -> TableSpec:
    """Normalise arguments into a TableSpec, optionally validating against *ds*."""
    spec = TableSpec(
        index_vars=_as_tuple(index),
        column_vars=_as_tuple(columns),
        values_var=values,
        aggfunc=aggfunc,
        margins=bool(margins),
    )
    if ds is not None:
        for name in spec.index_vars + spec.column_vars:
            column(ds, name)  # raises UnknownColumnError
        if spec.values_var is not None:
            vcol = column(ds, spec.values_var)
            if vcol.kind != "numeric":
                raise TypeMismatchError(
                    f"values column {spec.values_var!r} is categorical; "
                    "aggregation needs a numeric column"
                )
    return spec


@dataclass(frozen=True)
class Cell:
    """One table cell before any disclosure checking."""

    count: int
    contributions: tuple  # floats; empty for count-only tables
    aggregate: float | None  # None when undefined


@dataclass(frozen=True)
class RawTable:
    """A complete table: label grids plus a cells grid, rows x cols."""

    spec: TableSpec
    row_labels: tuple  # of tuples, one per index_var component
    col_labels: tuple  # of tuples; ((values_var,),) style for flat pivots
    cells: tuple  # of tuples of Cell

    def cell(self, i: int, j: int) -> Cell:
        return self.cells[i][j]


def _aggregate(aggfunc, count, contributions):
    if aggfunc == "count":
        return float(count) if count else None
    if count == 0:
        return None
    if aggfunc == "sum":
        return math.fsum(contributions)
    if aggfunc == "mean":
        return math.fsum(contributions) / count
    if aggfunc == "median":
        return statistics.median(contributions)
    # var / std: sample variance, undefined for a single contributor
    if count == 1:
        return None
    mean = math.fsum(contributions) / count
    ss = math.fsum((x - mean) ** 2 for x in contributions)
    var = ss / (count - 1)
    if aggfunc == "var":
        return var
    return math.sqrt(var)


def _make_cell(spec, rows):
    """*rows* is a list of (row_label, col_label, value) triples."""
    if spec.values_var is not None:
        contributions = tuple(v for _, _, v in rows if v is not None)
        count = len(contributions)
    else:
        contributions = ()
        count = len(rows)
    return Cell(count, contributions, _aggregate(spec.aggfunc, count, contributions))


def _retained_rows(ds, spec):
    index_cols = [column(ds, v) for v in spec.index_vars]
    col_cols = [column(ds, v) for v in spec.column_vars]
    if spec.values_var is not None:
        vcol = column(ds, spec.values_var)
        if vcol.kind != "numeric":
            raise TypeMismatchError(
                f"values column {spec.values_var!r} is categorical; "
                "aggregation needs a numeric column"
            )
    else:
        vcol = None
    retained = []
    for i in range(ds.row_count):
        rlab = tuple(c.values[i] for c in index_cols)
        if any(v is None for v in rlab):
            continue
        clab = tuple(c.values[i] for c in col_cols)
        if any(v is None for v in clab):
            continue
        value = vcol.values[i] if vcol is not None else None
        retained.append((rlab, clab, value))
    if not retained:
        raise EmptyTableError(
            "no rows left to tabulate once missing index/column values are dropped"
        )
    return retained


def _margin_pad(label, width):
    return (label,) + ("",) * (width - 1)


def tabulate(ds: Dataset, spec: TableSpec) -> RawTable:
    """Build the full table for *spec*, margins included when requested."""
    retained = _retained_rows(ds, spec)

    row_labels = sorted({r for r, _, _ in retained})
    if spec.column_vars:
        col_labels = sorted({c for _, c, _ in retained})
    elif spec.values_var is not None:
        col_labels = [(spec.values_var,)]
    else:
        col_labels = [("count",)]

    groups = {}
    for triple in retained:
        groups.setdefault((triple[0], triple[1]), []).append(triple)

    grid = []
    for rlab in row_labels:
        row = []
        for clab in col_labels:
            key = (rlab, clab if spec.column_vars else ())
            row.append(_make_cell(spec, groups.get(key, [])))
        grid.append(row)

    if spec.margins:
        if spec.column_vars:
            # margin column: totals across columns for each row
            by_row = {}
            for triple in retained:
                by_row.setdefault(triple[0], []).append(triple)
            for rlab, row in zip(row_labels, grid):
                row.append(_make_cell(spec, by_row.get(rlab, [])))
        # margin row: totals across rows for each column
        margin_row = []
        if spec.column_vars:
            by_col = {}
            for triple in retained:
                by_col.setdefault(triple[1], []).append(triple)
            for clab in col_labels:
                margin_row.append(_make_cell(spec, by_col.get(clab, [])))
        else:
            margin_row.append(_make_cell(spec, retained))
        if spec.column_vars:
            margin_row.append(_make_cell(spec, retained))  # grand total
            col_labels = list(col_labels) + [
                _margin_pad(MARGIN_LABEL, len(spec.column_vars))
            ]
        grid.append(margin_row)
        row_labels = list(row_labels) + [
            _margin_pad(MARGIN_LABEL, len(spec.index_vars))
        ]

    return RawTable(
        spec=spec,
        row_labels=tuple(row_labels),
        col_labels=tuple(col_labels),
        cells=tuple(tuple(row) for row in grid),
    )


def crosstab(ds: Dataset, spec: TableSpec) -> RawTable:
    """Two-way (or deeper) table: distinct column values become columns."""
    if not spec.column_vars:
        raise TableError("crosstab needs at least one column variable")
    return tabulate(ds, spec)


def pivot_table(ds: Dataset, spec: TableSpec) -> RawTable:
    """Like crosstab, but column variables are optional (one-column result)."""
    return tabulate(ds, spec)


def format_label(label: tuple) -> str:
    """Human-readable form of an axis label tuple."""
    parts = []
    for item in label:
        if item == "" or item is None:
            continue
        if isinstance(item, float):
            if item == int(item) and abs(item) < 1e16:
                parts.append(str(int(item)))
            else:
                parts.append(repr(item))
        else:
            parts.append(str(item))
    return "|".join(parts)
