"""Finite-set Lipschitz estimation and its subgradient"""

import logging
from dataclasses import dataclass
from threading import Lock
from typing import Tuple, Union

import numpy as np
from scipy.spatial.distance import pdist

from odelip.config import Config
from odelip.core.dataset import Dataset, SampleSet
from odelip.core.errors import InputError
from odelip.core.network import Gradients, MlpParams
from odelip.model.mlp import backward, forward

logger = logging.getLogger(__name__)


class EstimatorCounter:
    """Thread-safe count of estimate_lipschitz calls"""
    
    def __init__(self):
        self._count = 0
        self._lock = Lock()
    
    def increment(self):
        with self._lock:
            self._count += 1
    
    def reset(self):
        with self._lock:
            self._count = 0
    
    @property
    def count(self) -> int:
        with self._lock:
            return self._count


# Global instrumentation counter
estimator_calls = EstimatorCounter()


def _distinct_rows(points: np.ndarray) -> np.ndarray:
    """Drop duplicate rows, keeping first occurrences in their original order"""
    _, first = np.unique(points, axis=0, return_index=True)
    return points[np.sort(first)]


@dataclass
class ProbeSet:
    """Finite set S of network inputs; duplicates are dropped on construction"""
    points: np.ndarray  # (n, 1 + d)
    seed: int = 0
    
    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        self.points = _distinct_rows(points)
        if len(self.points) < 2:
            raise InputError(f"A probe set needs at least 2 distinct points, got {len(self.points)}")
    
    def __len__(self) -> int:
        return len(self.points)
    
    def subsample(self, rng: np.random.Generator, n: int = Config.STEP_PROBE_N) -> "ProbeSet":
        """Random subset of min(n, |S|) points"""
        if n >= len(self):
            return self
        index = rng.choice(len(self), size=n, replace=False)
        return ProbeSet(points=self.points[index], seed=self.seed)


@dataclass
class LipEstimate:
    """Largest difference quotient over S and the pair attaining it"""
    value: float
    argmax_pair: Tuple[int, int]


def sample_probe_set(source: Union[Dataset, SampleSet], n: int, seed: int) -> ProbeSet:
    """
    Sample n distinct training inputs without replacement
    
    Args:
        source: Dataset (its train split is used) or a SampleSet
        n: Probe count; n >= number of distinct inputs takes all of them
        seed: RNG seed
    """
    if n < 2:
        raise InputError(f"Probe count must be >= 2, got {n}")
    block = source.train if isinstance(source, Dataset) else source
    if len(block) == 0:
        raise InputError("Cannot sample probe points from an empty training set")
    candidates = _distinct_rows(block.inputs)
    if len(candidates) < 2:
        raise InputError("Fewer than 2 distinct training inputs")
    if n >= len(candidates):
        return ProbeSet(points=candidates, seed=seed)
    rng = np.random.default_rng(seed)
    index = rng.choice(len(candidates), size=n, replace=False)
    return ProbeSet(points=candidates[index], seed=seed)


def pair_index(n: int, flat: int) -> Tuple[int, int]:
    """(a, b) with a < b for a position in condensed (pdist) order"""
    a_idx, b_idx = np.triu_indices(n, k=1)
    return int(a_idx[flat]), int(b_idx[flat])


def estimate_lipschitz(params: MlpParams, probe: ProbeSet) -> LipEstimate:
    """
    max over unordered pairs of |N(x_a) - N(x_b)| / |x_a - x_b|
    
    Pairs are scanned in lexicographic (a, b) order, so ties resolve to the
    lowest pair.
    """
    estimator_calls.increment()
    outputs, _ = forward(params, probe.points)
    ratios = pdist(outputs) / pdist(probe.points)
    flat = int(np.argmax(ratios))
    return LipEstimate(value=float(ratios[flat]), argmax_pair=pair_index(len(probe), flat))


def lipschitz_value_and_subgradient(params: MlpParams, x_a, x_b) -> Tuple[float, Gradients]:
    """
    g = |N(x_a) - N(x_b)| / |x_a - x_b| and its gradient w.r.t. the parameters
    at a frozen pair; the zero gradient is returned where N(x_a) = N(x_b)
    """
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64)
    span = float(np.linalg.norm(x_a - x_b))
    if span == 0:
        raise InputError("Lipschitz subgradient needs two distinct points")
    
    outputs, tape = forward(params, np.vstack([x_a, x_b]))
    diff = outputs[0] - outputs[1]
    gap = float(np.linalg.norm(diff))
    if gap == 0:
        return 0.0, Gradients.zeros_like(params)
    
    unit = diff / (gap * span)
    grads, _ = backward(params, tape, np.vstack([unit, -unit]))
    return gap / span, grads


def lipschitz_subgradient(params: MlpParams, pair) -> Gradients:
    """Gradient of the difference quotient at a fixed pair (x_a, x_b)"""
    x_a, x_b = pair
    return lipschitz_value_and_subgradient(params, x_a, x_b)[1]
