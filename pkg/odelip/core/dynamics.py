"""Right-hand side systems and trajectories"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from odelip.core.errors import InputError

Interval = Tuple[float, float]
RhsFunction = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RhsSystem:
    """A closed-form system x' = f(t, x) with its sampling protocol"""
    id: str
    dim: int
    rhs: RhsFunction = field(repr=False, compare=False)
    time_interval: Interval
    dt: float
    ic_box: Tuple[Interval, ...]
    n_ic: int
    requires_positive_time: bool = False  # f contains log(t)
    recovery_box: Optional[Tuple[Interval, ...]] = None  # x-ranges for the recovery grid
    
    def __post_init__(self):
        t_start, t_end = self.time_interval
        if self.dim < 1:
            raise InputError(f"System '{self.id}': dim must be >= 1, got {self.dim}")
        if not t_start < t_end:
            raise InputError(f"System '{self.id}': empty time interval {self.time_interval}")
        if self.dt <= 0:
            raise InputError(f"System '{self.id}': dt must be positive, got {self.dt}")
        if len(self.ic_box) != self.dim:
            raise InputError(f"System '{self.id}': ic_box has {len(self.ic_box)} intervals for dim {self.dim}")
        if self.n_ic < 0:
            raise InputError(f"System '{self.id}': n_ic must be non-negative")
        if self.n_times < 2:
            raise InputError(f"System '{self.id}': fewer than 2 sample times")
    
    @property
    def n_times(self) -> int:
        """Number of sample times M"""
        t_start, t_end = self.time_interval
        # tolerance keeps e.g. (3 - 0) / 0.5 from flooring to 5
        return int(math.floor((t_end - t_start) / self.dt + 1e-9)) + 1
    
    def sample_times(self) -> np.ndarray:
        """Times t_start + j*dt, constructed rather than accumulated"""
        return self.time_interval[0] + np.arange(self.n_times) * self.dt
    
    def recovery_domain(self) -> Tuple[Interval, Tuple[Interval, ...]]:
        """(time range, per-component state ranges) of the dense recovery grid"""
        return self.time_interval, self.recovery_box or self.ic_box


@dataclass
class Trajectory:
    """One solution path sampled on a uniform grid"""
    times: np.ndarray  # (M,)
    states: np.ndarray  # (M, d)
    ic: np.ndarray  # (d,)
    
    @property
    def dim(self) -> int:
        return self.states.shape[1]
    
    def __len__(self) -> int:
        return len(self.times)
