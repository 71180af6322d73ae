"""Walk one analysis session over the demo data, end to end.

Builds a count table and a mean-of-income table, fits a linear and a
logistic model, shows what the rules let through, and writes the release
bundle.  Run from anywhere:

    python scripts/run_demo_session.py --out demo_bundle.json
"""

import argparse
import os

from sdckit import (
    apply_checks,
    build_spec,
    crosstab,
    default_config,
    fit_model,
    load_csv,
    new_session,
    parse_formula,
)
from sdckit.render import render_outcome, render_values

DATA = os.path.join(os.path.dirname(__file__), "..", "data", "grants.csv")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo_bundle.json")
    parser.add_argument("--clock", default=None, help="fix all timestamps")
    args = parser.parse_args()

    config = default_config()
    session = new_session(config, clock=args.clock)
    ds = load_csv(os.path.normpath(DATA))

    for aggfunc, values in (("count", None), ("mean", "inc_grants")):
        spec = build_spec(
            "year", "grant_type", values=values, aggfunc=aggfunc, ds=ds
        )
        checked = apply_checks(crosstab(ds, spec), config)
        session.add_output(checked, f"demo crosstab aggfunc={aggfunc}")
        print(f"--- year x grant_type, {aggfunc} ---")
        print(render_outcome(checked))
        print("summary:", checked.summary_line())
        print(render_values(checked))
        print()

    for model, formula in (
        ("ols", "num_employees ~ inc_grants + grant_type"),
        ("logit", "survivor ~ inc_grants"),
    ):
        result = fit_model(model, parse_formula(formula, ds), config)
        session.add_output(result, f"demo {model} {formula!r}")
        print(f"--- {model}: {formula} ---")
        print(
            f"residual dof: {result.residual_dof}  fit: {result.fit:.4f}  "
            f"converged: {result.converged}"
        )
        for name, coef, se in zip(
            result.names, result.coefficients, result.std_errors
        ):
            print(f"  {name:<24} {coef:>14.6g}  (se {se:.6g})")
        print()

    session.finalise(args.out, "json")
    print(f"release bundle written to {args.out}")


if __name__ == "__main__":
    main()
