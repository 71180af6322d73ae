"""Generate the checked-in demo microdata (data/grants.csv).

Synthetic charity-grant records: one row per organisation per year, with
the yearly grant income, a staff count, and a survival indicator.  The
panel is built so that a mean-of-income table over year x grant_type
exercises every disclosure rule:

* G, N and R organisations are numerous enough that all their cells pass;
* the R/G stream has too few organisations in every year (frequency rule);
* in 2010 the R/G stream is additionally dominated by one large grant, so
  that single cell also trips both dominance rules.

Deterministic: fixed seed, rows shuffled once at the end.
"""

import csv
import math
import os
import random

OUT_PATH = os.path.join(os.path.dirname(__file__), "..", "data", "grants.csv")

YEARS = range(2010, 2016)

# grant_type -> (contributors per year, income range)
STREAMS = {
    "G": ((12, 16), (5_000_000, 15_000_000)),
    "N": ((11, 15), (90_000, 160_000)),
    "R": ((12, 18), (4_000_000, 11_000_000)),
    "R/G": ((4, 8), (80_000, 120_000)),
}

# The 2010 R/G cell is fixed: three contributors, one dominant.
RG_2010 = [640_000.0, 30_000.0, 18_000.0]


def survival_probability(income):
    # bigger grants, better odds; centred so both outcomes stay common
    z = (math.log10(income) - 5.5) * 1.1
    return 1.0 / (1.0 + math.exp(-z))


def main():
    rng = random.Random(20100)
    rows = []
    for year in YEARS:
        for grant_type, ((lo_n, hi_n), (lo_v, hi_v)) in STREAMS.items():
            if grant_type == "R/G" and year == 2010:
                incomes = list(RG_2010)
            else:
                incomes = [
                    round(rng.uniform(lo_v, hi_v), 2)
                    for _ in range(rng.randint(lo_n, hi_n))
                ]
            for income in incomes:
                employees = max(1, round(income / 5000.0 + rng.gauss(0.0, 40.0)))
                if rng.random() < 0.03:
                    employees = ""  # a little missingness, as in real panels
                survivor = int(rng.random() < survival_probability(income))
                rows.append([year, grant_type, income, employees, survivor])
    rng.shuffle(rows)

    out = os.path.normpath(OUT_PATH)
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "grant_type", "inc_grants", "num_employees", "survivor"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
