"""Tests for generalization metrics, recovery error and reports"""

import math
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings, strategies as st

from odelip.core.dataset import NoiseSpec
from odelip.core.errors import DomainError, InputError, NormalizationError
from odelip.core.network import MlpParams
from odelip.core.report import ExperimentReport, ReportRow
from odelip.core.training import TrainConfig
from odelip.data.pipeline import build_dataset
from odelip.evaluation.metrics import (
    GridSpec,
    error_field,
    generalization_gap,
    hoeffding_bound,
    recovery_error,
    recovery_error_on_points,
    recovery_grid,
)
from odelip.evaluation.report import (
    build_report,
    export_recovery_grids,
    format_report_table,
    print_report_table,
    read_report_csv,
    write_report_csv,
    write_test_error_field,
)
from odelip.execution.sweep import run_alpha_sweep
from odelip.execution.trainer import mse
from odelip.model.mlp import init_params
from odelip.systems.catalog import eval_rhs_batch, get_system

SMALL = TrainConfig(n_layers=3, width=8, batch_size=20, max_epochs=8, baseline_epochs=2, probe_n=64,
                    step_probe_n=16)


@pytest.fixture(scope="module")
def small_dataset():
    system = replace(get_system("xcosx"), n_ic=30)
    return build_dataset(system, NoiseSpec(level=0.0, seed=1), split_seed=2)


@pytest.fixture(scope="module")
def sweep(small_dataset):
    return run_alpha_sweep(small_dataset, SMALL, [0.0, 0.01], workers=1)


def row(alpha, test, gap) -> ReportRow:
    return ReportRow(alpha=alpha, train_mse_abs=test - gap, test_mse_abs=test, train_rel_mse_pct=0.05,
                     test_rel_mse_pct=0.05, generalization_gap_abs=gap, lip_estimate=1.0)


def constant_network(value: float, n_in: int = 2) -> MlpParams:
    return MlpParams((n_in, 1), [np.zeros((1, n_in))], [np.array([value])])


# Generalization

def test_generalization_gap_examples():
    assert generalization_gap(0.2, 0.2) == 0.0
    assert generalization_gap(0.001, 0.0015) == pytest.approx(0.0005)
    with pytest.raises(InputError):
        generalization_gap(float("nan"), 0.1)


def test_hoeffding_examples():
    assert abs(hoeffding_bound(1000, 0.05) - 2 * math.exp(-5)) < 1e-12
    assert hoeffding_bound(1000, 0.05) == pytest.approx(0.013476, abs=1e-6)
    assert hoeffding_bound(10, 1e3) == 0.0
    with pytest.raises(InputError):
        hoeffding_bound(0, 0.05)
    with pytest.raises(InputError):
        hoeffding_bound(10, 0.0)


def test_hoeffding_is_monotone():
    sizes = [1, 10, 100, 1000]
    eps = [0.01, 0.05, 0.1, 0.5]
    table = np.array([[hoeffding_bound(m, e) for e in eps] for m in sizes])
    assert np.all(np.diff(table, axis=0) < 0)
    assert np.all(np.diff(table, axis=1) < 0)


# Error fields

def test_error_field_examples():
    points = np.array([[0.0, 1.0], [0.5, 2.0]])
    np.testing.assert_array_equal(error_field(constant_network(1.0), points, [1.0, 1.0]), [0.0, 0.0])
    np.testing.assert_array_equal(error_field(constant_network(1.5), points[:1], [1.0]), [0.5])


def test_error_field_aggregates_to_test_mse(sweep, small_dataset):
    params = sweep[0].params
    field = error_field(params, small_dataset.test.inputs, small_dataset.test.targets)
    assert np.mean(field ** 2) == pytest.approx(mse(params, small_dataset.test), abs=1e-12)


# Recovery

def test_recovery_grid_shape():
    grid = recovery_grid(get_system("explog"))
    assert grid.shape == (10_000, 2)
    assert grid[:, 0].min() == 0.1 and grid[:, 0].max() == 2.0
    assert grid[:, 1].min() == -1.5 and grid[:, 1].max() == 5.0
    assert recovery_grid(get_system("pendulum"), GridSpec(nt=4, nx=5)).shape == (100, 3)


def test_recovery_of_closed_form_is_zero():
    system = get_system("explog")
    assert recovery_error(lambda p: eval_rhs_batch(system, p), system) == 0.0
    assert recovery_error(lambda p: eval_rhs_batch(system, p), system, pointwise_relative=True) == 0.0


@pytest.mark.parametrize("system_id", ["xcosx", "explog", "lotka_volterra"])
def test_recovery_of_zero_network_is_100(system_id):
    system = get_system(system_id)
    zero = lambda p: np.zeros((len(p), system.dim))
    assert recovery_error(zero, system, GridSpec(nt=20, nx=20)) == pytest.approx(100.0)


def test_recovery_is_order_invariant():
    system = get_system("xcosx")
    params = init_params((2, 8, 1), seed=4)
    points = recovery_grid(system, GridSpec(nt=30, nx=30))
    shuffled = points[np.random.default_rng(0).permutation(len(points))]
    a = recovery_error_on_points(params, system, points)
    b = recovery_error_on_points(params, system, shuffled)
    assert a == pytest.approx(b, rel=1e-12)


def test_recovery_per_component():
    system = get_system("lotka_volterra")
    second = lambda p: eval_rhs_batch(system, p)[:, [1]]
    assert recovery_error(second, system, GridSpec(nt=5, nx=5), component=1) == 0.0


def test_recovery_domain_errors():
    system = get_system("explog")
    with pytest.raises(DomainError):
        recovery_error(constant_network(0.0), system, GridSpec(nt=5, nx=5, time_range=(0.0, 2.0)))
    still = get_system("still")
    with pytest.raises(NormalizationError):
        recovery_error(constant_network(0.0), still, GridSpec(nt=5, nx=5))


def test_recovery_grid_files(tmp_path):
    system = get_system("explog")
    grid = GridSpec(nt=3, nx=3, time_range=(0.5, 1.5), state_box=((-1.0, 1.0),))
    export_recovery_grids(constant_network(0.0), system, tmp_path, grid)
    rhs = pd.read_csv(tmp_path / "grid_rhs.csv")
    assert list(rhs.columns) == ["t", "x1", "value"]
    assert len(rhs) == 9
    assert rhs.loc[(rhs.t == 1.0) & (rhs.x1 == 0.0), "value"].item() == -1.0
    error = pd.read_csv(tmp_path / "grid_error.csv")
    np.testing.assert_allclose(error["value"], np.abs(rhs["value"]))
    assert (tmp_path / "grid_network.csv").is_file()


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.1, max_value=10.0))
def test_recovery_scales_inversely(c):
    system = get_system("xcosx")
    scaled = lambda p: c * eval_rhs_batch(system, p)
    assert recovery_error(scaled, system, GridSpec(nt=10, nx=10)) == pytest.approx(100.0 * abs(c - 1.0), abs=1e-9)


# Reports

def test_best_row_prefers_smaller_gap():
    report = ExperimentReport(system_id="xcosx", noise_level=0.0, rows=[row(0.0, 1e-3, 1e-4), row(0.01, 1e-3, 5e-5)])
    assert report.best_index == 1


def test_best_row_is_lowest_test_mse():
    report = ExperimentReport(system_id="xcosx", noise_level=0.0,
                              rows=[row(0.0, 2e-3, 1e-5), row(0.01, 1e-3, 5e-4), row(0.005, 3e-3, 0.0)])
    assert report.best.alpha == 0.01


def test_single_run_report(small_dataset):
    results = run_alpha_sweep(small_dataset, SMALL, [0.01])
    report = build_report(results, small_dataset)
    assert len(report.rows) == 1
    assert report.best_index == 0


def test_report_rows(sweep, small_dataset):
    report = build_report(sweep, small_dataset)
    assert [r.alpha for r in report.rows] == [0.0, 0.01]
    assert report.test_size == len(small_dataset.test)
    for result, r in zip(sweep, report.rows):
        assert r.train_mse_abs == mse(result.params, small_dataset.train)
        assert r.generalization_gap_abs == r.test_mse_abs - r.train_mse_abs
        assert r.lip_estimate > 0
        assert r.recovery_error_pct is None


def test_report_with_recovery(sweep, small_dataset):
    report = build_report(sweep, small_dataset, system=get_system("xcosx"), recovery=True,
                          grid=GridSpec(nt=10, nx=10))
    assert all(r.recovery_error_pct is not None and r.recovery_error_pct >= 0 for r in report.rows)
    with pytest.raises(InputError):
        build_report(sweep, small_dataset, recovery=True)
    with pytest.raises(InputError):
        build_report([], small_dataset)


def test_report_csv(tmp_path, sweep, small_dataset):
    report = build_report(sweep, small_dataset, system=get_system("xcosx"), recovery=True,
                          grid=GridSpec(nt=10, nx=10))
    path = write_report_csv(report, tmp_path / "report_c1.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == [
        "alpha", "train_rel_mse_pct", "generalization_gap_abs", "test_rel_mse_pct", "lip_estimate",
        "flagged", "recovery_error_pct", "best", "train_mse_abs", "test_mse_abs",
    ]
    assert frame["best"].sum() == 1
    
    loaded = read_report_csv(path, "xcosx", 0.0)
    assert loaded.rows == report.rows
    assert loaded.best_index == report.best_index


def test_test_error_field_export(tmp_path, sweep, small_dataset):
    path = write_test_error_field(sweep[0].params, small_dataset, tmp_path / "errors.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["t", "x1", "value"]
    assert len(frame) == len(small_dataset.test)


def test_report_table(capsys, sweep, small_dataset):
    report = build_report(sweep, small_dataset)
    print_report_table(report)
    out = capsys.readouterr().out
    assert "XCOSX" in out
    assert out.count("\n* ") == 1
    assert f"m = {len(small_dataset.test)}" in out
    assert format_report_table(report).splitlines()[0].startswith("=")
