/**
 * The minimal tabular shape the skin understands.  Cells are numbers,
 * strings, or null (missing); anything else is rejected at conversion
 * time so a bad frame never reaches the engine half-translated.
 */

export type Cell = number | string | null;

export interface DataFrame {
  columns: string[];
  /** row-major; every row must have one cell per column */
  rows: Cell[][];
}

export class FrameError extends Error {}

export function frameFromColumns(cols: Record<string, Cell[]>): DataFrame {
  const columns = Object.keys(cols);
  if (columns.length === 0) {
    throw new FrameError("frame needs at least one column");
  }
  const lengths = new Set(columns.map((c) => cols[c]!.length));
  if (lengths.size > 1) {
    throw new FrameError("columns have different lengths");
  }
  const n = cols[columns[0]!]!.length;
  const rows: Cell[][] = [];
  for (let i = 0; i < n; i++) {
    rows.push(columns.map((c) => cols[c]![i]!));
  }
  return { columns, rows };
}

/** Parse simple CSV text (no quoted fields) into a frame of raw strings. */
export function frameFromCsvText(text: string): DataFrame {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new FrameError("empty CSV text");
  }
  const columns = lines[0]!.split(",");
  const rows = lines.slice(1).map((line) => line.split(",") as Cell[]);
  return { columns, rows };
}

/**
 * Validate every cell, naming the offending column — conversion failures
 * must be the skin's own clear error, not a confusing engine one.
 */
export function checkFrame(frame: DataFrame): void {
  for (const row of frame.rows) {
    if (row.length !== frame.columns.length) {
      throw new FrameError(
        `row has ${row.length} cells, frame has ${frame.columns.length} columns`,
      );
    }
    for (let j = 0; j < row.length; j++) {
      const v = row[j];
      const ok =
        v === null || typeof v === "number" || typeof v === "string";
      if (!ok) {
        throw new FrameError(
          `column '${frame.columns[j]}' holds an unsupported value: ${String(v)}`,
        );
      }
    }
  }
}
