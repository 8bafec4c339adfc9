"""Finite quantum hypergroup construction and verification."""

from _qhf import (
    compare_b3_table,
    list_scenarios,
    run_scenario,
    verify_group_json,
)

__all__ = [
    "compare_b3_table",
    "list_scenarios",
    "run_scenario",
    "verify_group_json",
]
