"""Command line interface.

Exit codes follow the traffic-light the tool lives by:

* 0 — command completed and everything requested was safe to release
* 2 — command completed but at least one cell or fit was withheld
* 1 — the request itself failed (bad arguments, prohibited statistic, ...)
"""

from __future__ import annotations

import os
import shlex
import sys
from contextlib import contextmanager

import click

from .config import resolve_config
from .dataset import load_csv
from .errors import SdcError, SessionError, SessionLockError
from .formula import parse_formula
from .regression import fit_model
from .render import render_outcome, render_values
from .rules import apply_checks
from .session import (
    Session,
    load_session,
    render_coefficients,
    regression_summary_line,
    save_session,
    session_exists,
)
from .tabulation import build_spec, crosstab, pivot_table

DEFAULT_SESSION_DIR = "sdc_session"
CLOCK_ENV_VAR = "SDC_CLOCK"
LOCK_FILE = ".lock"


def _session_options(f):
    f = click.option(
        "--clock",
        default=None,
        help="Fixed UTC timestamp (2026-01-01T00:00:00Z) recorded on every "
        "output; for reproducible sessions.",
    )(f)
    f = click.option(
        "--config",
        "config_path",
        default=None,
        help="Risk-appetite YAML; defaults to $SDC_CONFIG, then built-ins.",
    )(f)
    f = click.option(
        "--session",
        "session_dir",
        default=DEFAULT_SESSION_DIR,
        show_default=True,
        help="Session directory holding the recorded outputs.",
    )(f)
    return f


def _open_session(session_dir, config_path, clock):
    """Load the session if one exists there, else create a fresh one."""
    if session_exists(session_dir):
        session = load_session(session_dir)
        if config_path is not None:
            click.echo(
                "note: session already exists; keeping its recorded config",
                err=True,
            )
        if clock is not None and clock != session.clock:
            click.echo(
                "note: session already exists; keeping its recorded clock",
                err=True,
            )
        return session
    if clock is None:
        clock = os.environ.get(CLOCK_ENV_VAR) or None
    return Session(config=resolve_config(config_path), clock=clock)


@contextmanager
def _locked(session_dir):
    os.makedirs(session_dir, exist_ok=True)
    lock_path = os.path.join(session_dir, LOCK_FILE)
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise SessionLockError(
            f"session {session_dir!r} is in use by another process "
            f"(delete {lock_path!r} if that process is gone)"
        ) from None
    os.close(fd)
    try:
        yield
    finally:
        os.unlink(lock_path)


def _fail(exc: SdcError):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _finish(status: str):
    sys.exit(0 if status == "pass" else 2)


@click.group()
def main():
    """Disclosure-controlled tabulation and regression over microdata."""


def _split_names(arg):
    if not arg:
        return ()
    return tuple(name.strip() for name in arg.split(","))


@main.command()
@click.option("--data", required=True, help="CSV file with the microdata.")
@click.option(
    "--index", required=True, help="Row variable(s), comma-separated."
)
@click.option("--columns", default=None, help="Column variable(s), comma-separated.")
@click.option("--values", default=None, help="Numeric column to aggregate.")
@click.option(
    "--aggfunc",
    default="count",
    show_default=True,
    help="count, sum, mean, median, std or var.",
)
@click.option("--margins", is_flag=True, help="Append All totals.")
@_session_options
def tabulate(data, index, columns, values, aggfunc, margins, session_dir,
             config_path, clock):
    """Build a table, check every cell, and record the result."""
    command = _canonical_tabulate(data, index, columns, values, aggfunc, margins)
    try:
        with _locked(session_dir):
            session = _open_session(session_dir, config_path, clock)
            ds = load_csv(data)
            spec = build_spec(
                _split_names(index),
                _split_names(columns),
                values,
                aggfunc,
                margins,
                ds=ds,
            )
            if spec.column_vars:
                table = crosstab(ds, spec)
            else:
                table = pivot_table(ds, spec)
            checked = apply_checks(table, session.config)
            oid = session.add_table(checked, command)
            save_session(session, session_dir)
    except SdcError as exc:
        _fail(exc)
    click.echo("outcome:")
    click.echo(render_outcome(checked))
    click.echo(f"summary: {checked.summary_line()}")
    click.echo("released:")
    click.echo(render_values(checked))
    click.echo(f"recorded: {oid}")
    _finish(checked.summary_status)


@main.command()
@click.option(
    "--model",
    required=True,
    type=click.Choice(["ols", "logit", "probit"]),
    help="Model family to fit.",
)
@click.option("--data", required=True, help="CSV file with the microdata.")
@click.option(
    "--formula",
    required=True,
    help='Model formula, e.g. "y ~ x + group" or "y ~ x - 1".',
)
@_session_options
def regress(model, data, formula, session_dir, config_path, clock):
    """Fit a model, check its residual degrees of freedom, and record it."""
    command = _canonical_regress(model, data, formula)
    try:
        with _locked(session_dir):
            session = _open_session(session_dir, config_path, clock)
            ds = load_csv(data)
            dm = parse_formula(formula, ds)
            result = fit_model(model, dm, session.config)
            oid = session.add_regression(result, command)
            record = session.get(oid)
            save_session(session, session_dir)
    except SdcError as exc:
        _fail(exc)
    status = record["summary"]["status"]
    coef = record["coefficients"]
    click.echo(
        "summary: " + regression_summary_line(status, coef["residual_dof"])
    )
    if status == "pass":
        click.echo(render_coefficients(coef))
    else:
        click.echo("coefficients withheld (reason: dof)")
    click.echo(f"recorded: {oid}")
    _finish(status)


@main.command(name="list")
@click.option(
    "--session",
    "session_dir",
    default=DEFAULT_SESSION_DIR,
    show_default=True,
    help="Session directory holding the recorded outputs.",
)
def list_outputs(session_dir):
    """Show every output recorded in the session."""
    try:
        if not session_exists(session_dir):
            click.echo("no outputs in session")
            return
        session = load_session(session_dir)
        click.echo(session.print_outputs())
    except SdcError as exc:
        _fail(exc)


@main.command()
@click.option("--id", "output_id", required=True, help="Output id to drop.")
@click.option(
    "--session",
    "session_dir",
    default=DEFAULT_SESSION_DIR,
    show_default=True,
    help="Session directory holding the recorded outputs.",
)
def remove(output_id, session_dir):
    """Drop one recorded output from the session."""
    try:
        if not session_exists(session_dir):
            raise SessionError(f"no session at {session_dir!r}")
        with _locked(session_dir):
            session = load_session(session_dir)
            session.remove_output(output_id)
            save_session(session, session_dir)
    except SdcError as exc:
        _fail(exc)
    click.echo(f"removed: {output_id}")


@main.command()
@click.option("--out", required=True, help="Bundle file (or directory).")
@click.option(
    "--format",
    "fmt",
    default="json",
    show_default=True,
    type=click.Choice(["json", "csv-bundle"]),
    help="Release bundle layout.",
)
@click.option(
    "--session",
    "session_dir",
    default=DEFAULT_SESSION_DIR,
    show_default=True,
    help="Session directory holding the recorded outputs.",
)
def finalise(out, fmt, session_dir):
    """Write the release bundle for the whole session."""
    try:
        if not session_exists(session_dir):
            raise SessionError(f"no session at {session_dir!r}")
        session = load_session(session_dir)
        session.finalise(out, fmt)
    except SdcError as exc:
        _fail(exc)
    click.echo(f"released {len(session.records)} outputs to {out}")


def _canonical_tabulate(data, index, columns, values, aggfunc, margins):
    parts = ["sdckit", "tabulate", "--data", shlex.quote(data)]
    parts += ["--index", shlex.quote(",".join(_split_names(index)))]
    if columns:
        parts += ["--columns", shlex.quote(",".join(_split_names(columns)))]
    if values is not None:
        parts += ["--values", shlex.quote(values)]
    parts += ["--aggfunc", aggfunc]
    if margins:
        parts.append("--margins")
    return " ".join(parts)


def _canonical_regress(model, data, formula):
    return " ".join(
        [
            "sdckit",
            "regress",
            "--model",
            model,
            "--data",
            shlex.quote(data),
            "--formula",
            shlex.quote(formula),
        ]
    )


if __name__ == "__main__":
    main()
