import { checkFrame, type Cell, type DataFrame } from "./dataframe";

// The engine reads "", "na" and "nan" (any case) as missing, so null and
// NaN both serialise to the empty field.
function field(value: Cell): string {
  if (value === null) return "";
  if (typeof value === "number") {
    if (Number.isNaN(value)) return "";
    return String(value);
  }
  return escape(value);
}

function escape(s: string): string {
  if (/[",\r\n]/.test(s)) {
    return '"' + s.replace(/"/g, '""') + '"';
  }
  return s;
}

/** Serialise a frame to the engine's CSV contract (RFC-4180 quoting). */
export function frameToCsv(frame: DataFrame): string {
  checkFrame(frame);
  const lines = [frame.columns.map(escape).join(",")];
  for (const row of frame.rows) {
    lines.push(row.map(field).join(","));
  }
  return lines.join("\n") + "\n";
}
