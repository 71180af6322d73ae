"""Plain-text table rendering for terminal output."""

from __future__ import annotations

from .rules import SUPPRESSED, CheckedTable
from .tabulation import format_label

#: How suppressed and undefined cells appear in released text output.
MASKED_TEXT = "NaN"


def format_value(value) -> str:
    if value is SUPPRESSED or value is None:
        return MASKED_TEXT
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e16:
            return repr(value)  # keeps the trailing .0
        return repr(value)
    return str(value)


def text_table(corner, col_heads, row_header, row_labels, cells) -> str:
    """Fixed-width grid: header line, axis-name line, then one line per row.

    All cell content arrives as strings; this only does alignment.
    """
    label_width = max(
        [len(corner), len(row_header)] + [len(lbl) for lbl in row_labels]
    )
    widths = []
    for j, head in enumerate(col_heads):
        column_cells = [row[j] for row in cells]
        widths.append(max([len(head)] + [len(c) for c in column_cells]))

    def line(label, row):
        out = label.ljust(label_width)
        for width, cell in zip(widths, row):
            out += "  " + cell.rjust(width)
        return out.rstrip()

    lines = [line(corner, col_heads), row_header.rstrip()]
    for label, row in zip(row_labels, cells):
        lines.append(line(label, row))
    return "\n".join(lines)


def _axis_texts(checked: CheckedTable):
    spec = checked.spec
    corner = "|".join(spec.column_vars)
    row_header = "|".join(spec.index_vars)
    row_labels = [format_label(lbl) for lbl in checked.row_labels]
    col_heads = [format_label(lbl) for lbl in checked.col_labels]
    return corner, col_heads, row_header, row_labels


def render_values(checked: CheckedTable) -> str:
    """The released table: safe cells shown, everything else masked."""
    corner, col_heads, row_header, row_labels = _axis_texts(checked)
    cells = [[format_value(v) for v in row] for row in checked.values]
    return text_table(corner, col_heads, row_header, row_labels, cells)


def render_outcome(checked: CheckedTable) -> str:
    """Per-cell rule verdicts in the same layout as the released table."""
    corner, col_heads, row_header, row_labels = _axis_texts(checked)
    cells = [[o.token() for o in row] for row in checked.outcome]
    return text_table(corner, col_heads, row_header, row_labels, cells)
