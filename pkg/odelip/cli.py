"""Command-line experiment runner: generate, sweep, recover, report"""

import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from odelip.config import Config
from odelip.core.dataset import Dataset
from odelip.core.errors import OdelipError
from odelip.core.report import ExperimentReport
from odelip.data.io import read_dataset, sidecar_path, write_dataset
from odelip.data.pipeline import build_dataset
from odelip.evaluation.report import (
    FLOAT_FORMAT,
    build_report,
    export_recovery_grids,
    print_report_table,
    read_report_csv,
    write_report_csv,
    write_test_error_field,
)
from odelip.execution.experiment import ExperimentConfig, dump_config, load_experiment_config
from odelip.execution.sweep import export_sweep, run_alpha_sweep, run_name
from odelip.model.checkpoint import load_checkpoint
from odelip.systems.catalog import get_system

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FLAGGED = 2

DATASET_FILE = "dataset.csv"
CONFIG_ECHO = "config.env"


def dataset_path(config: ExperimentConfig) -> Path:
    return Path(config.out) / DATASET_FILE


def report_path(config: ExperimentConfig, component: Optional[int]) -> Path:
    return Path(config.out) / f"report_c{(component or 0) + 1}.csv"


def components(config: ExperimentConfig) -> List[Optional[int]]:
    """One network per output component; scalar systems use the whole target"""
    dim = get_system(config.system).dim
    return [None] if dim == 1 else list(range(dim))


def generate_dataset(config: ExperimentConfig) -> Dataset:
    return build_dataset(
        get_system(config.system),
        config.noise_spec(),
        split_seed=config.split_seed,
        ic_seed=config.ic_seed,
        substeps=config.substeps,
        smoothing_order=config.smoothing_order,
        workers=config.workers,
    )


def _dataset_matches(config: ExperimentConfig, path: Path) -> bool:
    """True when the stored dataset was generated from this configuration"""
    meta_path = sidecar_path(path)
    if not path.is_file() or not meta_path.is_file():
        return False
    with open(meta_path) as f:
        meta = json.load(f)
    expected = {
        "system_id": config.system,
        "noise_level": config.noise,
        "noise_seed": config.noise_seed,
        "noise_param_is_variance": config.noise_param_is_variance,
        "ic_seed": config.ic_seed,
        "split_seed": config.split_seed,
        "smoothing_order": config.smoothing_order,
        "substeps": config.substeps,
        "extension_depth": Config.EXTENSION_DEPTH,
        "train_fraction": Config.TRAIN_FRACTION,
    }
    stale = [key for key, value in expected.items() if meta.get(key) != value]
    if stale:
        logger.info(f"Dataset at {path} was built with different settings: {', '.join(stale)}")
    return not stale


def load_or_generate(config: ExperimentConfig) -> Dataset:
    path = dataset_path(config)
    if _dataset_matches(config, path):
        logger.info(f"Using dataset {path}")
        return read_dataset(path)
    logger.info(f"No matching dataset at {path}, generating")
    dataset = generate_dataset(config)
    write_dataset(dataset, path)
    return dataset


def cmd_generate(config: ExperimentConfig) -> Path:
    """Write the dataset CSV and its metadata sidecar"""
    return write_dataset(generate_dataset(config), dataset_path(config))


def cmd_sweep(config: ExperimentConfig) -> List[ExperimentReport]:
    """
    Run the alpha sweep for every output component
    
    Writes records/, checkpoints/, errors/ and one report_c<k>.csv per
    component under config.out.
    """
    out = Path(config.out)
    dataset = load_or_generate(config)
    system = get_system(config.system)
    
    reports = []
    for component in components(config):
        results = run_alpha_sweep(
            dataset, config.train_config(), config.alphas, component=component, workers=config.workers
        )
        export_sweep(results, out, component)
        for result in results:
            write_test_error_field(
                result.params, dataset, out / "errors" / f"{run_name(result.alpha, component)}.csv", component
            )
        report = build_report(
            results,
            dataset,
            system=system,
            recovery=config.recovery,
            component=component,
            grid=config.grid_spec(),
            pointwise_relative=config.pointwise_relative,
            probe_n=config.probe_n,
            probe_seed=config.probe_seed,
        )
        write_report_csv(report, report_path(config, component))
        reports.append(report)
    return reports


def _component_from_name(path: Path) -> int:
    match = re.search(r"_c(\d+)$", path.stem)
    return int(match.group(1)) - 1 if match else 0


def cmd_recover(
    config: ExperimentConfig,
    checkpoint: Optional[str] = None,
    component: Optional[int] = None,
) -> pd.DataFrame:
    """
    Grid values of N, f and |N - f| plus the recovery error per checkpoint
    
    Args:
        config: Experiment configuration (its out directory holds checkpoints/)
        checkpoint: A single checkpoint file instead of the whole sweep
        component: 0-based component of that checkpoint (default: from its name)
    
    Returns:
        One row per recovered network, also written to <out>/recovery.csv
    """
    out = Path(config.out)
    system = get_system(config.system)
    
    if checkpoint is not None:
        path = Path(checkpoint)
        if system.dim == 1:
            component = None
        elif component is None:
            component = _component_from_name(path)
        jobs = [(None, component, path)]
    else:
        jobs = [
            (alpha, component, out / "checkpoints" / f"{run_name(alpha, component)}.ckpt")
            for component in components(config)
            for alpha in config.alphas
        ]
    
    rows = []
    for alpha, comp, path in jobs:
        params = load_checkpoint(path)
        target_dir = out / "recover" / path.stem
        errors = export_recovery_grids(
            params, system, target_dir, config.grid_spec(), comp, config.pointwise_relative
        )
        rows.append({
            "alpha": alpha if alpha is not None else float("nan"),
            "component": (comp or 0) + 1,
            "checkpoint": path.name,
            "recovery_error_pct": errors["recovery_error_pct"],
        })
    
    frame = pd.DataFrame(rows, columns=["alpha", "component", "checkpoint", "recovery_error_pct"])
    frame.to_csv(out / "recovery.csv", index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Recovery errors written to {out / 'recovery.csv'}")
    return frame


def cmd_report(config: ExperimentConfig) -> List[ExperimentReport]:
    """Print the stored per-component reports"""
    meta_path = sidecar_path(dataset_path(config))
    test_size = 0
    if meta_path.is_file():
        with open(meta_path) as f:
            test_size = int(json.load(f).get("n_test", 0))
    
    reports = []
    for component in components(config):
        path = report_path(config, component)
        if not path.is_file():
            raise OdelipError(f"No report at {path}; run 'odelip sweep' first")
        report = read_report_csv(path, config.system, config.noise, component, test_size)
        print_report_table(report)
        reports.append(report)
    return reports


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value experiment file")
    common.add_argument("--system", help="system id (xcosx, explog, lotka_volterra, pendulum)")
    common.add_argument("--noise", type=float, help="noise level (std as a fraction of the mean range)")
    common.add_argument("--seed", type=int, help="base seed; every seed field derives from it")
    common.add_argument("--out", help="output directory")
    common.add_argument("--alphas", help="comma-separated regularization grid")
    common.add_argument("--workers", type=int, help="parallel training runs")
    common.add_argument("--recovery", action="store_true", default=None, help="attach grid recovery errors")
    common.add_argument("--log-level", default=Config.LOG_LEVEL, help="logging level")
    
    parser = argparse.ArgumentParser(prog="odelip", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("generate", parents=[common], help="write the dataset CSV")
    commands.add_parser("sweep", parents=[common], help="train the alpha sweep and write reports")
    recover = commands.add_parser("recover", parents=[common], help="grid recovery error per checkpoint")
    recover.add_argument("--checkpoint", help="single checkpoint file")
    recover.add_argument("--component", type=int, help="1-based component of --checkpoint")
    commands.add_parser("report", parents=[common], help="print stored reports")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    return {
        "system": args.system,
        "noise": args.noise,
        "seed": args.seed,
        "out": args.out,
        "alphas": args.alphas,
        "workers": args.workers,
        "recovery": args.recovery,
    }


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point
    
    Returns:
        0 on success, 1 on a hard error, 2 when a report has flagged rows
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s',
    )
    
    try:
        config = load_experiment_config(args.config, _overrides(args))
        dump_config(config, Path(config.out) / CONFIG_ECHO)
        
        if args.command == "generate":
            cmd_generate(config)
            return EXIT_OK
        if args.command == "recover":
            component = args.component - 1 if args.component is not None else None
            cmd_recover(config, args.checkpoint, component)
            return EXIT_OK
        
        reports = cmd_sweep(config) if args.command == "sweep" else cmd_report(config)
        flagged = [row for report in reports for row in report.rows if row.flagged]
        if flagged:
            logger.warning(f"{len(flagged)} run(s) did not match the baseline train MSE")
            return EXIT_FLAGGED
        return EXIT_OK
    except (OdelipError, OSError) as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
