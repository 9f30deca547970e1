"""Experiment reports: assembly, CSV export and console table"""

import logging
import math
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from odelip.config import Config
from odelip.core.dataset import Dataset, SampleSet
from odelip.core.dynamics import RhsSystem
from odelip.core.errors import InputError, NormalizationError
from odelip.core.network import MlpParams
from odelip.core.report import ExperimentReport, ReportRow
from odelip.core.training import SweepResult
from odelip.evaluation.metrics import (
    GridSpec,
    error_field,
    evaluate_model,
    generalization_gap,
    hoeffding_bound,
    recovery_error_on_points,
    recovery_grid,
    reference_values,
)
from odelip.execution.trainer import mse, relative_mse
from odelip.model.lipschitz import estimate_lipschitz, sample_probe_set

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
PathLike = Union[str, Path]

REPORT_COLUMNS = [
    "alpha",
    "train_rel_mse_pct",
    "generalization_gap_abs",
    "test_rel_mse_pct",
    "lip_estimate",
    "flagged",
]
TRAILING_COLUMNS = ["best", "train_mse_abs", "test_mse_abs"]
HOEFFDING_EPS = 0.05


def _relative_or_nan(params: MlpParams, block: SampleSet) -> float:
    try:
        return relative_mse(params, block)
    except NormalizationError:
        logger.warning("All-zero targets, relative MSE reported as NaN")
        return math.nan


def build_report(
    results: Sequence[SweepResult],
    dataset: Dataset,
    system: Optional[RhsSystem] = None,
    recovery: bool = False,
    component: Optional[int] = None,
    grid: GridSpec = GridSpec(),
    pointwise_relative: bool = False,
    probe_n: int = Config.REPORT_PROBE_N,
    probe_seed: int = 0,
) -> ExperimentReport:
    """
    One row per sweep result, in sweep order
    
    Args:
        results: Output of run_alpha_sweep
        dataset: The dataset the sweep trained on
        system: Closed-form system, required when recovery is on
        recovery: Attach the grid recovery error to every row
        component: Output component the networks learned
        grid: Recovery grid resolution
        pointwise_relative: Mean of pointwise ratios instead of ratio of means
        probe_n: Probe points for the reported Lipschitz estimate
        probe_seed: Seed of the reporting probe set
    
    Returns:
        ExperimentReport with the best row available as report.best
    """
    if not results:
        raise InputError("Cannot build a report from an empty sweep")
    if recovery and system is None:
        raise InputError("Recovery errors need the closed-form system")
    
    train_block = dataset.train.component(component)
    test_block = dataset.test.component(component)
    probe = sample_probe_set(train_block, min(probe_n, len(train_block)), probe_seed)
    points = recovery_grid(system, grid) if recovery else None
    
    report = ExperimentReport(
        system_id=dataset.provenance.system_id,
        noise_level=dataset.noise.level,
        component=component,
        test_size=len(test_block),
    )
    for result in results:
        train_abs = mse(result.params, train_block)
        test_abs = mse(result.params, test_block)
        row = ReportRow(
            alpha=result.alpha,
            train_mse_abs=train_abs,
            test_mse_abs=test_abs,
            train_rel_mse_pct=_relative_or_nan(result.params, train_block),
            test_rel_mse_pct=_relative_or_nan(result.params, test_block),
            generalization_gap_abs=generalization_gap(train_abs, test_abs),
            lip_estimate=estimate_lipschitz(result.params, probe).value,
            flagged=result.flagged,
        )
        if points is not None:
            row.recovery_error_pct = recovery_error_on_points(
                result.params, system, points, pointwise_relative, component
            )
        report.rows.append(row)
    
    logger.info(
        f"Report for '{report.system_id}' component={component}: best alpha {report.best.alpha:g} "
        f"(test MSE {report.best.test_mse_abs:.4g})"
    )
    return report


def report_frame(report: ExperimentReport) -> pd.DataFrame:
    columns = list(REPORT_COLUMNS)
    if report.has_recovery:
        columns.append("recovery_error_pct")
    columns += TRAILING_COLUMNS
    
    best = report.best_index
    records = []
    for i, row in enumerate(report.rows):
        record = {
            "alpha": row.alpha,
            "train_rel_mse_pct": row.train_rel_mse_pct,
            "generalization_gap_abs": row.generalization_gap_abs,
            "test_rel_mse_pct": row.test_rel_mse_pct,
            "lip_estimate": row.lip_estimate,
            "flagged": row.flagged,
            "recovery_error_pct": row.recovery_error_pct,
            "best": i == best,
            "train_mse_abs": row.train_mse_abs,
            "test_mse_abs": row.test_mse_abs,
        }
        records.append(record)
    return pd.DataFrame(records, columns=columns)


def write_report_csv(report: ExperimentReport, path: PathLike) -> Path:
    """Report CSV in the per-alpha table's column order"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report_frame(report).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Report exported to {path}")
    return path


def read_report_csv(
    path: PathLike,
    system_id: str = "",
    noise_level: float = math.nan,
    component: Optional[int] = None,
    test_size: int = 0,
) -> ExperimentReport:
    """Load a report written by write_report_csv"""
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = set(REPORT_COLUMNS + TRAILING_COLUMNS) - set(frame.columns)
    if missing:
        raise InputError(f"{path}: not a report file, missing columns {sorted(missing)}")
    has_recovery = "recovery_error_pct" in frame.columns
    
    rows = []
    for record in frame.to_dict("records"):
        rows.append(
            ReportRow(
                alpha=float(record["alpha"]),
                train_mse_abs=float(record["train_mse_abs"]),
                test_mse_abs=float(record["test_mse_abs"]),
                train_rel_mse_pct=float(record["train_rel_mse_pct"]),
                test_rel_mse_pct=float(record["test_rel_mse_pct"]),
                generalization_gap_abs=float(record["generalization_gap_abs"]),
                lip_estimate=float(record["lip_estimate"]),
                flagged=bool(record["flagged"]),
                recovery_error_pct=float(record["recovery_error_pct"]) if has_recovery else None,
            )
        )
    return ExperimentReport(
        system_id=system_id, noise_level=noise_level, rows=rows, component=component, test_size=test_size
    )


def grid_frame(points: np.ndarray, values: np.ndarray) -> pd.DataFrame:
    """(t, x1..xd, value) rows"""
    dim = points.shape[1] - 1
    frame = pd.DataFrame(points, columns=["t"] + [f"x{k + 1}" for k in range(dim)])
    frame["value"] = values
    return frame


def write_grid_csv(points: np.ndarray, values: np.ndarray, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid_frame(points, values).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_test_error_field(params: MlpParams, dataset: Dataset, path: PathLike, component: Optional[int] = None) -> Path:
    """Per-point |N - Y| on the test pairs"""
    block = dataset.test.component(component)
    return write_grid_csv(block.inputs, error_field(params, block.inputs, block.targets), path)


def export_recovery_grids(
    params: MlpParams,
    system: RhsSystem,
    out_dir: PathLike,
    grid: GridSpec = GridSpec(),
    component: Optional[int] = None,
    pointwise_relative: bool = False,
) -> Dict[str, float]:
    """
    Write the grid values of N, of f and of |N - f| under out_dir
    
    Multi-output networks (component None with d > 1) store Euclidean norms
    in the value column.
    
    Returns:
        {"recovery_error_pct": ...}
    """
    out_dir = Path(out_dir)
    points = recovery_grid(system, grid)
    network = evaluate_model(params, points)
    reference = reference_values(system, points, component)
    errors = np.linalg.norm(network - reference, axis=1)
    
    def column(values: np.ndarray) -> np.ndarray:
        return values[:, 0] if values.shape[1] == 1 else np.linalg.norm(values, axis=1)
    
    write_grid_csv(points, column(network), out_dir / "grid_network.csv")
    write_grid_csv(points, column(reference), out_dir / "grid_rhs.csv")
    write_grid_csv(points, errors, out_dir / "grid_error.csv")
    
    value = recovery_error_on_points(params, system, points, pointwise_relative, component)
    logger.info(f"Recovery grids for '{system.id}' written to {out_dir}/ (error {value:.4f}%)")
    return {"recovery_error_pct": value}


def format_report_table(report: ExperimentReport) -> str:
    width = 96 if report.has_recovery else 84
    component = "" if report.component is None else f"  component {report.component + 1}"
    lines = [
        "=" * width,
        f"{report.system_id.upper()}  noise {report.noise_level:g}{component}",
        "=" * width,
    ]
    header = f"  {'alpha':>8} {'train MSE %':>13} {'gap (abs)':>12} {'test MSE %':>13} {'Lip est.':>10}"
    if report.has_recovery:
        header += f" {'recovery %':>11}"
    lines.append(header + "  flags")
    best = report.best_index
    for i, row in enumerate(report.rows):
        marker = "*" if i == best else " "
        line = (
            f"{marker} {row.alpha:>8g} {row.train_rel_mse_pct:>12.4f}% {row.generalization_gap_abs:>12.2e} "
            f"{row.test_rel_mse_pct:>12.4f}% {row.lip_estimate:>10.4g}"
        )
        if report.has_recovery:
            recovery = row.recovery_error_pct
            line += f" {recovery:>10.3f}%" if recovery is not None else f" {'-':>11}"
        lines.append(line + ("  unmatched" if row.flagged else ""))
    lines.append("-" * width)
    if report.test_size > 0:
        bound = hoeffding_bound(report.test_size, HOEFFDING_EPS)
        lines.append(
            f"  * best test MSE; |E_rho - E_test| <= {HOEFFDING_EPS} with probability >= {1 - bound:.4f} "
            f"(m = {report.test_size})"
        )
    else:
        lines.append("  * best test MSE")
    lines.append("=" * width)
    return "\n".join(lines)


def print_report_table(report: ExperimentReport):
    """Print the per-alpha table to the console"""
    print("\n" + format_report_table(report) + "\n")
