"""Training abstractions"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

from odelip.config import Config
from odelip.core.errors import InputError
from odelip.core.network import MlpParams

OPTIMIZERS = ("adam", "sgd")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one training run"""
    alpha: float = 0.0
    batch_size: int = 50
    lr0: float = 1e-2
    decay_factor: float = 0.1
    decay_period: int = 7
    max_epochs: int = 60
    baseline_epochs: int = 10
    n_layers: int = 8  # affine layers, output layer included
    width: int = 30
    probe_n: int = Config.REPORT_PROBE_N
    step_probe_n: int = Config.STEP_PROBE_N
    optimizer: str = "adam"
    momentum: float = 0.0  # sgd only
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    lrelu_eps: float = Config.LRELU_EPS
    init_seed: int = 0
    shuffle_seed: int = 1
    probe_seed: int = 2
    
    def __post_init__(self):
        if not self.alpha >= 0:
            raise InputError(f"alpha must be >= 0, got {self.alpha}")
        if self.batch_size < 1:
            raise InputError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0 < self.decay_factor <= 1:
            raise InputError(f"decay_factor must lie in (0, 1], got {self.decay_factor}")
        if self.decay_period < 1:
            raise InputError(f"decay_period must be >= 1, got {self.decay_period}")
        if self.lr0 < 0:
            raise InputError(f"lr0 must be >= 0, got {self.lr0}")
        if self.n_layers < 1 or self.width < 1:
            raise InputError(f"Invalid architecture: {self.n_layers} layers of width {self.width}")
        if self.max_epochs < 1 or self.baseline_epochs < 1:
            raise InputError("Epoch budgets must be >= 1")
        if self.max_epochs < self.baseline_epochs:
            raise InputError(
                f"max_epochs ({self.max_epochs}) must be >= baseline_epochs ({self.baseline_epochs})"
            )
        if self.probe_n < 2 or self.step_probe_n < 2:
            raise InputError("Probe sizes must be >= 2")
        if self.optimizer not in OPTIMIZERS:
            raise InputError(f"optimizer must be one of {OPTIMIZERS}, got '{self.optimizer}'")
        if not 0 <= self.momentum < 1:
            raise InputError(f"momentum must lie in [0, 1), got {self.momentum}")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1):
            raise InputError(f"Adam betas must lie in [0, 1), got ({self.adam_beta1}, {self.adam_beta2})")
    
    def layer_sizes(self, n_in: int, n_out: int) -> tuple:
        return (n_in,) + (self.width,) * (self.n_layers - 1) + (n_out,)


def sig3(value: float) -> str:
    """A value printed to 3 significant digits"""
    return f"{value:.3g}"


@dataclass(frozen=True)
class StopRule:
    """Stop after a fixed number of epochs or once train MSE matches a target"""
    epochs: Optional[int] = None
    target_mse: Optional[float] = None
    
    def __post_init__(self):
        if (self.epochs is None) == (self.target_mse is None):
            raise InputError("StopRule needs exactly one of epochs or target_mse")
    
    @classmethod
    def fixed(cls, epochs: int) -> "StopRule":
        return cls(epochs=epochs)
    
    @classmethod
    def match(cls, target_mse: float) -> "StopRule":
        return cls(target_mse=target_mse)
    
    def matches(self, train_mse: float) -> bool:
        """Train MSE rounds to the target at 3 significant digits"""
        return self.target_mse is not None and sig3(train_mse) == sig3(self.target_mse)
    
    def overshot(self, train_mse: float) -> bool:
        """Train MSE fell below the target's 3-significant-digit window"""
        return self.target_mse is not None and train_mse < self.target_mse and not self.matches(train_mse)
    
    def above(self, train_mse: float) -> bool:
        """Train MSE still sits above the target's 3-significant-digit window"""
        return self.target_mse is not None and train_mse > self.target_mse and not self.matches(train_mse)
    
    def is_met(self, epoch: int, train_mse: float) -> bool:
        if self.epochs is not None:
            return epoch >= self.epochs
        return self.matches(train_mse)


@dataclass
class EpochStats:
    """End-of-epoch measurements"""
    epoch: int
    lr: float
    loss: float
    train_mse: float
    train_rel_mse_pct: float
    lip_estimate: float = math.nan


@dataclass
class TrainRecord:
    """History of one run"""
    alpha: float
    component: Optional[int] = None
    epochs: List[EpochStats] = field(default_factory=list)
    initial_mse: float = math.nan
    flagged: bool = False  # stop rule never met within max_epochs
    params: Optional[MlpParams] = field(default=None, repr=False)
    
    @property
    def final(self) -> EpochStats:
        return self.epochs[-1]


@dataclass
class SweepResult:
    """One alpha of a sweep"""
    alpha: float
    params: MlpParams
    record: TrainRecord
    
    @property
    def flagged(self) -> bool:
        return self.record.flagged
