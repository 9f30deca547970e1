"""Alpha sweeps under the baseline-matching protocol, and their exports"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

from odelip.config import Config
from odelip.core.dataset import Dataset, SampleSet
from odelip.core.errors import InputError
from odelip.core.training import StopRule, SweepResult, TrainConfig, TrainRecord, sig3
from odelip.execution.trainer import train, with_alpha
from odelip.model.checkpoint import save_checkpoint

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ["epoch", "lr", "loss", "train_mse", "train_rel_mse_pct", "lip_estimate"]
FLOAT_FORMAT = "%.17g"


def run_alpha_sweep(
    dataset: Union[Dataset, SampleSet],
    base_config: TrainConfig,
    alphas: Optional[Sequence[float]] = None,
    component: Optional[int] = None,
    workers: int = Config.MAX_WORKERS,
) -> List[SweepResult]:
    """
    Train the baseline alpha for a fixed budget, then every other alpha until
    its train MSE matches the baseline to 3 significant digits
    
    Args:
        dataset: Training data
        base_config: Shared hyperparameters (its alpha is ignored)
        alphas: Regularization grid; must contain the baseline alpha
        component: Output component learned by every run
        workers: Parallel runs after the baseline
    
    Returns:
        One SweepResult per alpha, in grid order
    """
    alphas = list(Config.DEFAULT_ALPHAS if alphas is None else alphas)
    if Config.BASELINE_ALPHA not in alphas:
        raise InputError(f"The alpha grid must contain the baseline alpha {Config.BASELINE_ALPHA}")
    
    baseline_params, baseline_record = train(
        with_alpha(base_config, Config.BASELINE_ALPHA),
        dataset,
        StopRule.fixed(base_config.baseline_epochs),
        component,
    )
    baseline_mse = baseline_record.final.train_mse
    logger.info(
        f"Baseline train MSE {sig3(baseline_mse)} after {base_config.baseline_epochs} epochs "
        f"(alpha={Config.BASELINE_ALPHA}, component={component})"
    )
    
    others = [a for a in dict.fromkeys(alphas) if a != Config.BASELINE_ALPHA]
    
    def run(alpha: float) -> SweepResult:
        params, record = train(with_alpha(base_config, alpha), dataset, StopRule.match(baseline_mse), component)
        if record.flagged:
            logger.warning(
                f"alpha={alpha:g} component={component}: baseline {sig3(baseline_mse)} not matched "
                f"within {base_config.max_epochs} epochs (last {sig3(record.final.train_mse)})"
            )
        return SweepResult(alpha=alpha, params=params, record=record)
    
    if workers and workers > 1 and len(others) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            finished = list(pool.map(run, others))
    else:
        finished = [run(alpha) for alpha in others]
    
    by_alpha = {result.alpha: result for result in finished}
    by_alpha[Config.BASELINE_ALPHA] = SweepResult(
        alpha=Config.BASELINE_ALPHA, params=baseline_params, record=baseline_record
    )
    return [by_alpha[alpha] for alpha in dict.fromkeys(alphas)]


def run_name(alpha: float, component: Optional[int]) -> str:
    """File stem for one run, components 1-based"""
    return f"alpha_{alpha:g}_c{(component or 0) + 1}"


def record_frame(record: TrainRecord) -> pd.DataFrame:
    return pd.DataFrame(
        [[s.epoch, s.lr, s.loss, s.train_mse, s.train_rel_mse_pct, s.lip_estimate] for s in record.epochs],
        columns=RECORD_COLUMNS,
    )


def write_train_record(record: TrainRecord, path: Union[str, Path]) -> Path:
    """Per-epoch history CSV"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record_frame(record).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def export_sweep(results: Sequence[SweepResult], out_dir: Union[str, Path], component: Optional[int]) -> None:
    """Write every run's record and checkpoint under out_dir"""
    out_dir = Path(out_dir)
    for result in results:
        name = run_name(result.alpha, component)
        write_train_record(result.record, out_dir / "records" / f"{name}.csv")
        save_checkpoint(result.params, out_dir / "checkpoints" / f"{name}.ckpt")
    logger.info(f"Exported {len(results)} runs to {out_dir}/")
