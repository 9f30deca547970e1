"""Execution package initialization"""

from odelip.execution.optimizer import Adam, GradientDescent, make_optimizer
from odelip.execution.trainer import mse, relative_mse, total_loss, learning_rate, train
from odelip.execution.sweep import run_alpha_sweep, export_sweep, run_name
from odelip.execution.experiment import ExperimentConfig, load_experiment_config, dump_config

__all__ = [
    "Adam",
    "GradientDescent",
    "make_optimizer",
    "mse",
    "relative_mse",
    "total_loss",
    "learning_rate",
    "train",
    "run_alpha_sweep",
    "export_sweep",
    "run_name",
    "ExperimentConfig",
    "load_experiment_config",
    "dump_config",
]
