"""Disclosure rules and their application to tables.

Three rules, always reported in this order:

threshold
    A cell needs at least ``safe_threshold`` contributors.
p-ratio
    Concentration check: the part of the cell below its top three
    contributions must amount to at least ``safe_pratio_p`` times the
    single largest contribution, in magnitude.
nk-rule
    Dominance check: the ``safe_nk_n`` largest contributions must stay
    below ``safe_nk_k`` times the cell total, in magnitude.

The frequency rule applies to every table; the two dominance rules only
make sense where cell values are built from contribution magnitudes, so
count tables skip them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import RuleConfig
from .tabulation import MAGNITUDE_AGGS, RawTable, TableSpec

RULE_NAMES = ("threshold", "p-ratio", "nk-rule")


class _Suppressed:
    """Sentinel distinguishing a suppressed value from an undefined one."""

    __slots__ = ()

    def __repr__(self):
        return "SUPPRESSED"


SUPPRESSED = _Suppressed()


def check_threshold(count: int, config: RuleConfig) -> bool:
    """Safe iff the cell has at least the configured number of contributors."""
    return count >= config.safe_threshold


def check_p_ratio(contributions, config: RuleConfig) -> bool:
    """Safe iff the cell remainder is big enough relative to its largest term.

    With the magnitudes sorted, everything below the top three must sum to
    at least p times the largest single magnitude.  Cells with three or
    fewer nonzero contributions have an empty remainder and fail whenever
    any contribution is nonzero.
    """
    mags = sorted(abs(x) for x in contributions)
    largest = mags[-1] if mags else 0.0
    body = math.fsum(mags[: max(len(mags) - 3, 0)])
    return body >= config.safe_pratio_p * largest


def check_nk(contributions, config: RuleConfig) -> bool:
    """Safe iff the N largest magnitudes stay under K times the cell total."""
    mags = sorted((abs(x) for x in contributions), reverse=True)
    total = math.fsum(mags)
    if total == 0.0:
        return True
    top = math.fsum(mags[: config.nk_n])
    return top < config.safe_nk_k * total


@dataclass(frozen=True)
class CellOutcome:
    """Which rules flagged one cell, in canonical rule order."""

    flags: tuple  # subset of RULE_NAMES, in RULE_NAMES order

    @property
    def passed(self) -> bool:
        return not self.flags

    def token(self) -> str:
        if not self.flags:
            return "ok"
        return " ".join(f"{flag};" for flag in self.flags)


def cell_outcome(cell, dominance: bool, config: RuleConfig) -> CellOutcome:
    flags = []
    if not check_threshold(cell.count, config):
        flags.append("threshold")
    if dominance:
        if not check_p_ratio(cell.contributions, config):
            flags.append("p-ratio")
        if not check_nk(cell.contributions, config):
            flags.append("nk-rule")
    return CellOutcome(tuple(flags))


@dataclass(frozen=True)
class CheckedTable:
    """A table after disclosure checking: safe values kept, the rest masked."""

    spec: TableSpec
    row_labels: tuple
    col_labels: tuple
    values: tuple  # grid of number | None | SUPPRESSED
    outcome: tuple  # grid of CellOutcome
    masks: dict  # rule name -> grid of bool (True = flagged)
    summary_status: str  # "pass" | "fail"
    summary_counts: dict  # rule name -> number of flagged cells

    def summary_line(self) -> str:
        if self.summary_status == "pass":
            return "pass"
        line = "fail;"
        for rule in RULE_NAMES:
            n = self.summary_counts[rule]
            if n:
                line += f" {rule}: {n} cells suppressed;"
        return line

    def outcome_strings(self) -> list:
        return [[o.token() for o in row] for row in self.outcome]


def apply_checks(table: RawTable, config: RuleConfig) -> CheckedTable:
    """Run every applicable rule on every cell and mask what fails."""
    dominance = table.spec.aggfunc in MAGNITUDE_AGGS
    count_table = table.spec.aggfunc == "count"

    values = []
    outcomes = []
    masks = {rule: [] for rule in RULE_NAMES}
    counts = dict.fromkeys(RULE_NAMES, 0)

    for cell_row in table.cells:
        value_row = []
        outcome_row = []
        mask_rows = {rule: [] for rule in RULE_NAMES}
        for cell in cell_row:
            outcome = cell_outcome(cell, dominance, config)
            outcome_row.append(outcome)
            for rule in RULE_NAMES:
                flagged = rule in outcome.flags
                mask_rows[rule].append(flagged)
                if flagged:
                    counts[rule] += 1
            if not outcome.passed:
                value_row.append(SUPPRESSED)
            elif count_table:
                value_row.append(cell.count)
            else:
                value_row.append(cell.aggregate)
        values.append(tuple(value_row))
        outcomes.append(tuple(outcome_row))
        for rule in RULE_NAMES:
            masks[rule].append(tuple(mask_rows[rule]))

    status = "pass" if all(n == 0 for n in counts.values()) else "fail"
    return CheckedTable(
        spec=table.spec,
        row_labels=table.row_labels,
        col_labels=table.col_labels,
        values=tuple(values),
        outcome=tuple(outcomes),
        masks={rule: tuple(masks[rule]) for rule in RULE_NAMES},
        summary_status=status,
        summary_counts=counts,
    )
