"""
Desk-scale reproduction runs

These train full sweeps with the per-system defaults and take minutes, so they
only run with ODELIP_RUN_SLOW=1.
"""

import os
import statistics

import pytest

from odelip.core.training import sig3
from odelip.data.pipeline import build_dataset
from odelip.evaluation.report import build_report
from odelip.execution.experiment import load_experiment_config
from odelip.execution.sweep import run_alpha_sweep
from odelip.systems.catalog import get_system

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(os.getenv("ODELIP_RUN_SLOW") != "1", reason="set ODELIP_RUN_SLOW=1 to run"),
]

SEEDS = (0, 100, 200)


def run_experiment(system_id: str, noise: float, seed: int, recovery: bool = False):
    config = load_experiment_config(overrides={"system": system_id, "noise": noise, "seed": seed})
    system = get_system(system_id)
    dataset = build_dataset(
        system, config.noise_spec(), split_seed=config.split_seed, ic_seed=config.ic_seed, workers=config.workers
    )
    results = run_alpha_sweep(dataset, config.train_config(), config.alphas, workers=config.workers)
    report = build_report(
        results, dataset, system=system, recovery=recovery, probe_n=config.probe_n, probe_seed=config.probe_seed
    )
    return results, report


def test_noiseless_xcosx_sweep():
    best_regularized, unregularized = [], []
    for seed in SEEDS:
        results, report = run_experiment("xcosx", 0.0, seed)
        baseline = sig3(results[1].record.final.train_mse)
        for result in results:
            if not result.flagged:
                assert sig3(result.record.final.train_mse) == baseline
        assert all(row.test_rel_mse_pct < 0.5 for row in report.rows)
        best_regularized.append(min(row.test_mse_abs for row in report.rows if row.alpha > 0))
        unregularized.append(next(row.test_mse_abs for row in report.rows if row.alpha == 0))
    assert statistics.median(best_regularized) <= statistics.median(unregularized)


def test_noisy_xcosx_sweep():
    regularized_best = 0
    for seed in SEEDS:
        _, report = run_experiment("xcosx", 0.02, seed)
        assert all(row.test_rel_mse_pct < 1.0 for row in report.rows)
        regularized_best += report.best.alpha > 0
    assert regularized_best >= 2


def test_explog_recovery_band():
    regularized_best = 0
    for seed in SEEDS:
        _, report = run_experiment("explog", 0.01, seed, recovery=True)
        assert 0.5 <= report.best.recovery_error_pct <= 5.0
        regularized_best += report.rows[report.best_recovery_index()].alpha > 0
    assert regularized_best >= 2
