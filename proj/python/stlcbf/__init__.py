"""Temporal-logic motion planning with time-varying control barriers.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._core import (
    Formula,
    PlanError,
    check_scenario,
    eval_boolean,
    eval_robustness,
    format_formula,
    horizon,
    parse_formula,
    report_from_csv,
    run_scenario,
    solve_qp,
)

__all__ = [
    "Formula",
    "PlanError",
    "check_scenario",
    "eval_boolean",
    "eval_robustness",
    "format_formula",
    "horizon",
    "parse_formula",
    "report_from_csv",
    "run_scenario",
    "solve_qp",
]
