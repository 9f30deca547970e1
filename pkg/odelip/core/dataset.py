"""Training data abstractions"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from odelip.config import Config
from odelip.core.errors import InputError


@dataclass(frozen=True)
class NoiseSpec:
    """Additive noise as a fraction of the per-component mean range"""
    level: float = 0.0  # 0, 0.01 or 0.02 in the reference experiments
    seed: int = 0
    param_is_variance: bool = False  # treat level as variance instead of std
    
    def __post_init__(self):
        if not self.level >= 0:
            raise InputError(f"Noise level must be >= 0, got {self.level}")
    
    @property
    def sigma(self) -> float:
        """Standard deviation of the unit noise n_ij"""
        return float(np.sqrt(self.level)) if self.param_is_variance else self.level


@dataclass
class SamplePair:
    """Network input (t, x) and derivative target"""
    input: np.ndarray  # (1 + d,)
    target: np.ndarray  # (d,)


@dataclass
class SampleSet:
    """A block of sample pairs stored as aligned input/target matrices"""
    inputs: np.ndarray  # (n, 1 + d)
    targets: np.ndarray  # (n, d_out)
    
    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=np.float64))
        self.targets = np.asarray(self.targets, dtype=np.float64)
        if self.targets.ndim == 1:
            self.targets = self.targets[:, None]
        if len(self.inputs) != len(self.targets):
            raise InputError(
                f"Inputs and targets disagree in length: {len(self.inputs)} vs {len(self.targets)}"
            )
    
    def __len__(self) -> int:
        return len(self.inputs)
    
    def __iter__(self) -> Iterator[SamplePair]:
        for x, y in zip(self.inputs, self.targets):
            yield SamplePair(input=x, target=y)
    
    @classmethod
    def from_pairs(cls, pairs: List[SamplePair]) -> "SampleSet":
        if not pairs:
            raise InputError("Cannot build a sample set from zero pairs")
        return cls(
            inputs=np.stack([p.input for p in pairs]),
            targets=np.stack([np.atleast_1d(p.target) for p in pairs]),
        )
    
    def component(self, k: Optional[int]) -> "SampleSet":
        """Restrict targets to output component k (None keeps all)"""
        if k is None:
            return self
        return SampleSet(inputs=self.inputs, targets=self.targets[:, [k]])
    
    def take(self, index: np.ndarray) -> "SampleSet":
        return SampleSet(inputs=self.inputs[index], targets=self.targets[index])


@dataclass(frozen=True)
class Provenance:
    """Where a dataset came from"""
    system_id: str
    ic_seed: int
    split_seed: int
    dt: float
    n_ic: int
    n_times: int
    smoothing_order: str = "smooth_then_extend"
    substeps: int = Config.RK4_SUBSTEPS
    extension_depth: int = Config.EXTENSION_DEPTH
    train_fraction: float = Config.TRAIN_FRACTION


@dataclass
class Dataset:
    """Train/test split of sample pairs for one system and noise level"""
    train: SampleSet
    test: SampleSet
    dim: int
    noise: NoiseSpec
    provenance: Provenance
    # positions of train/test rows on the original (i, j) grid, h = j + i*M
    train_index: np.ndarray = field(default=None, repr=False)
    test_index: np.ndarray = field(default=None, repr=False)
    
    def __post_init__(self):
        if self.train_index is None:
            self.train_index = np.arange(len(self.train))
        if self.test_index is None:
            self.test_index = len(self.train) + np.arange(len(self.test))
    
    @property
    def size(self) -> int:
        return len(self.train) + len(self.test)
