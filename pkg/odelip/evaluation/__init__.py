"""Evaluation package initialization"""

from odelip.evaluation.metrics import (
    GridSpec,
    generalization_gap,
    hoeffding_bound,
    error_field,
    recovery_grid,
    recovery_error,
)
from odelip.evaluation.report import (
    build_report,
    write_report_csv,
    read_report_csv,
    export_recovery_grids,
    print_report_table,
)

__all__ = [
    "GridSpec",
    "generalization_gap",
    "hoeffding_bound",
    "error_field",
    "recovery_grid",
    "recovery_error",
    "build_report",
    "write_report_csv",
    "read_report_csv",
    "export_recovery_grids",
    "print_report_table",
]
