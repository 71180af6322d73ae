"""Session store: every checked output is recorded before it can leave.

A session accumulates outputs (checked tables and model fits) as plain
JSON-ready dicts, in the exact shape the release bundle uses.  Rendering
happens at recording time so that a reloaded session is byte-identical
to the one that produced it, and so that ids are never re-issued even
after removals.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .config import RuleConfig
from .errors import SessionError, UnknownOutputError
from .regression import RegressionResult
from .rules import RULE_NAMES, SUPPRESSED, CheckedTable
from .tabulation import format_label

SCHEMA_VERSION = "1"
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"
SESSION_FILE = "session.json"
FINALISE_FORMATS = ("json", "csv-bundle")


def _check_clock(clock):
    if clock is None:
        return None
    try:
        datetime.strptime(clock, TIMESTAMP_FORMAT)
    except (TypeError, ValueError):
        raise SessionError(
            f"clock must look like 2026-01-01T00:00:00Z, got {clock!r}"
        ) from None
    return clock


def _json_number(value):
    """Bundle values are numbers or null; non-finite floats become null."""
    if value is None or value is SUPPRESSED:
        return None
    if isinstance(value, int):
        return value
    value = float(value)
    if not math.isfinite(value):
        return None
    return value


def table_summary_line(status: str, counts: dict) -> str:
    if status == "pass":
        return "pass"
    line = "fail;"
    for rule in RULE_NAMES:
        n = counts.get(rule, 0)
        if n:
            line += f" {rule}: {n} cells suppressed;"
    return line


def regression_summary_line(status: str, residual_dof: int) -> str:
    return f"{status}; residual dof: {residual_dof};"


@dataclass
class Session:
    config: RuleConfig
    clock: str | None = None  # fixed ISO timestamp; None means wall clock
    records: list = field(default_factory=list)
    next_ordinal: int = 1

    def __post_init__(self):
        self.clock = _check_clock(self.clock)

    # -- recording ----------------------------------------------------

    def _timestamp(self) -> str:
        if self.clock is not None:
            return self.clock
        return datetime.now(timezone.utc).strftime(TIMESTAMP_FORMAT)

    def _new_id(self) -> str:
        oid = f"output_{self.next_ordinal}"
        self.next_ordinal += 1
        return oid

    def add_output(self, payload, command: str) -> str:
        """Record one checked output; returns its never-reused id."""
        if isinstance(payload, CheckedTable):
            return self.add_table(payload, command)
        if isinstance(payload, RegressionResult):
            return self.add_regression(payload, command)
        raise SessionError(
            f"cannot record a {type(payload).__name__}; expected a checked "
            "table or a regression result"
        )

    def add_table(self, checked: CheckedTable, command: str) -> str:
        record = {
            "id": self._new_id(),
            "command": command,
            "timestamp": self._timestamp(),
            "kind": "table",
            "summary": {
                "status": checked.summary_status,
                "counts": {
                    rule: checked.summary_counts[rule] for rule in RULE_NAMES
                },
            },
            "outcome": checked.outcome_strings(),
            "rows": [format_label(lbl) for lbl in checked.row_labels],
            "cols": [format_label(lbl) for lbl in checked.col_labels],
            "values": [
                [_json_number(v) for v in row] for row in checked.values
            ],
        }
        self.records.append(record)
        return record["id"]

    def add_regression(self, result: RegressionResult, command: str) -> str:
        safe = result.safe
        record = {
            "id": self._new_id(),
            "command": command,
            "timestamp": self._timestamp(),
            "kind": "regression",
            "summary": {
                "status": "pass" if safe else "fail",
                "counts": {"dof_ok": safe},
            },
            "coefficients": {
                "names": list(result.names),
                "estimate": [_json_number(v) for v in result.coefficients],
                "std_error": [_json_number(v) for v in result.std_errors],
                "statistic": [_json_number(v) for v in result.statistics],
                "residual_dof": result.residual_dof,
                "fit": _json_number(result.fit),
                "converged": result.converged,
                "model_kind": result.model_kind,
            },
        }
        self.records.append(record)
        return record["id"]

    # -- inspection ---------------------------------------------------

    def get(self, oid: str) -> dict:
        for record in self.records:
            if record["id"] == oid:
                return record
        raise UnknownOutputError(oid)

    def remove_output(self, oid: str) -> None:
        record = self.get(oid)
        self.records.remove(record)

    def print_outputs(self) -> str:
        if not self.records:
            return "no outputs in session"
        return "\n\n".join(render_record(r) for r in self.records)

    # -- release ------------------------------------------------------

    def bundle(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "config": self.config.as_dict(),
            "outputs": list(self.records),
        }

    def finalise(self, path: str, fmt: str = "json") -> None:
        if not self.records:
            raise SessionError("nothing to release: the session has no outputs")
        if fmt not in FINALISE_FORMATS:
            raise SessionError(
                f"unknown release format {fmt!r}; use one of {FINALISE_FORMATS}"
            )
        bundle = self.bundle()
        if fmt == "json":
            _write_json(bundle, path)
            return
        os.makedirs(path, exist_ok=True)
        _write_json(bundle, os.path.join(path, "manifest.json"))
        for record in self.records:
            if record["kind"] == "table":
                _write_table_csv(record, os.path.join(path, record["id"] + ".csv"))


def _write_json(payload: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def _csv_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e16:
            return repr(value)
        return repr(value)
    return str(value)


def _write_table_csv(record: dict, path: str) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + list(record["cols"]))
        for label, row in zip(record["rows"], record["values"]):
            writer.writerow([label] + [_csv_field(v) for v in row])


def new_session(config: RuleConfig, clock: str | None = None) -> Session:
    """A fresh session pinned to one risk appetite."""
    return Session(config=config, clock=clock)


# -- persistence --------------------------------------------------------


def save_session(session: Session, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    payload = session.bundle()
    payload["next_ordinal"] = session.next_ordinal
    payload["clock"] = session.clock
    _write_json(payload, os.path.join(directory, SESSION_FILE))


def load_session(directory: str) -> Session:
    path = os.path.join(directory, SESSION_FILE)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise SessionError(f"cannot read session file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SessionError(f"session file {path!r} is corrupt: {exc}") from exc
    if payload.get("version") != SCHEMA_VERSION:
        raise SessionError(
            f"session file {path!r} has version {payload.get('version')!r}, "
            f"expected {SCHEMA_VERSION!r}"
        )
    session = Session(
        config=RuleConfig(**payload["config"]),
        clock=payload.get("clock"),
    )
    session.records = list(payload["outputs"])
    session.next_ordinal = int(payload["next_ordinal"])
    return session


def session_exists(directory: str) -> bool:
    return os.path.exists(os.path.join(directory, SESSION_FILE))


# -- text rendering of stored records ------------------------------------


def _stored_grid(cols, rows, cells) -> str:
    head = [""] + list(cols)
    widths = [max(len(head[0]), *(len(r) for r in rows))]
    for j, col in enumerate(cols):
        widths.append(max(len(col), *(len(row[j]) for row in cells)))
    lines = []
    first = head[0].ljust(widths[0])
    for w, c in zip(widths[1:], cols):
        first += "  " + c.rjust(w)
    lines.append(first.rstrip())
    for label, row in zip(rows, cells):
        line = label.ljust(widths[0])
        for w, cell in zip(widths[1:], row):
            line += "  " + cell.rjust(w)
        lines.append(line.rstrip())
    return "\n".join(lines)


def _stored_value_text(value) -> str:
    if value is None:
        return "NaN"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def render_record(record: dict) -> str:
    """One output as terminal text, straight from its stored form."""
    lines = [
        f"[{record['id']}] {record['kind']}  {record['timestamp']}",
        f"command: {record['command']}",
    ]
    if record["kind"] == "table":
        lines.append(
            "summary: "
            + table_summary_line(
                record["summary"]["status"], record["summary"]["counts"]
            )
        )
        cells = [
            [_stored_value_text(v) for v in row] for row in record["values"]
        ]
        lines.append(_stored_grid(record["cols"], record["rows"], cells))
        return "\n".join(lines)

    coef = record["coefficients"]
    lines.append(
        "summary: "
        + regression_summary_line(
            record["summary"]["status"], coef["residual_dof"]
        )
    )
    if record["summary"]["status"] == "pass":
        lines.append(render_coefficients(coef))
    else:
        lines.append("coefficients withheld (reason: dof)")
    return "\n".join(lines)


def _coef_text(value) -> str:
    if value is None:
        return "NaN"
    return f"{value:.6g}"


def render_coefficients(coef: dict) -> str:
    headers = ["", "estimate", "std_error", "statistic"]
    rows = []
    for i, name in enumerate(coef["names"]):
        rows.append(
            [
                name,
                _coef_text(coef["estimate"][i]),
                _coef_text(coef["std_error"][i]),
                _coef_text(coef["statistic"][i]),
            ]
        )
    widths = [max(len(headers[j]), *(len(r[j]) for r in rows)) for j in range(4)]
    lines = []
    head = headers[0].ljust(widths[0])
    for j in range(1, 4):
        head += "  " + headers[j].rjust(widths[j])
    lines.append(head.rstrip())
    for row in rows:
        line = row[0].ljust(widths[0])
        for j in range(1, 4):
            line += "  " + row[j].rjust(widths[j])
        lines.append(line.rstrip())
    lines.append(
        f"model: {coef['model_kind']}  residual dof: {coef['residual_dof']}  "
        f"fit: {_coef_text(coef['fit'])}  converged: {coef['converged']}"
    )
    return "\n".join(lines)
