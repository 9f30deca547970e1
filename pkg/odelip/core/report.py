"""Experiment report rows"""

import math
from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class ReportRow:
    """One regularization parameter of a sweep"""
    alpha: float
    train_mse_abs: float
    test_mse_abs: float
    train_rel_mse_pct: float
    test_rel_mse_pct: float
    generalization_gap_abs: float
    lip_estimate: float
    flagged: bool = False
    recovery_error_pct: Optional[float] = None


@dataclass
class ExperimentReport:
    """Per-alpha results for one system, noise level and output component"""
    system_id: str
    noise_level: float
    rows: List[ReportRow] = field(default_factory=list)
    component: Optional[int] = None
    test_size: int = 0
    
    @property
    def best_index(self) -> int:
        """Row with minimal test MSE; ties go to the smaller generalization gap"""
        if not self.rows:
            return -1
        return min(
            range(len(self.rows)),
            key=lambda i: (self.rows[i].test_mse_abs, self.rows[i].generalization_gap_abs, i),
        )
    
    @property
    def best(self) -> Optional[ReportRow]:
        return self.rows[self.best_index] if self.rows else None
    
    @property
    def has_recovery(self) -> bool:
        return any(row.recovery_error_pct is not None for row in self.rows)
    
    def best_recovery_index(self) -> int:
        errors = [
            row.recovery_error_pct if row.recovery_error_pct is not None else math.inf
            for row in self.rows
        ]
        return min(range(len(errors)), key=lambda i: (errors[i], i)) if errors else -1
