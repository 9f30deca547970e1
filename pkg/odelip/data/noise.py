"""Initial-condition sampling and mean-range noise"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from odelip.core.dataset import NoiseSpec
from odelip.core.dynamics import RhsSystem, Trajectory
from odelip.core.errors import InputError

logger = logging.getLogger(__name__)


def sample_initial_conditions(system: RhsSystem, seed: int, n: Optional[int] = None) -> np.ndarray:
    """
    Draw initial conditions uniformly from the system's IC box
    
    Args:
        system: System providing ic_box and the default count n_ic
        seed: RNG seed
        n: Override for the number of initial conditions
    
    Returns:
        (n, d) array, one initial condition per row
    """
    n = system.n_ic if n is None else n
    if n <= 0:
        raise InputError(f"Need at least one initial condition, got {n}")
    lo = np.array([a for a, _ in system.ic_box], dtype=np.float64)
    hi = np.array([b for _, b in system.ic_box], dtype=np.float64)
    if np.any(hi < lo):
        raise InputError(f"Inverted IC box {system.ic_box}")
    rng = np.random.default_rng(seed)
    return rng.uniform(lo, hi, size=(n, system.dim))


def mean_range(trajectories: Sequence[Trajectory], k: int) -> float:
    """Average over trajectories of max - min of component k (0-based)"""
    if not trajectories:
        raise InputError("mean_range needs at least one trajectory")
    dim = trajectories[0].dim
    if not 0 <= k < dim:
        raise InputError(f"Component {k} out of range for dimension {dim}")
    ranges = [abs(tr.states[:, k].max() - tr.states[:, k].min()) for tr in trajectories]
    return float(np.mean(ranges))


def mean_ranges(trajectories: Sequence[Trajectory]) -> np.ndarray:
    """mean_range for every component"""
    return np.array([mean_range(trajectories, k) for k in range(trajectories[0].dim)])


def add_noise(trajectories: Sequence[Trajectory], spec: NoiseSpec) -> List[Trajectory]:
    """
    Perturb every sample by n * M_k with n ~ Normal(0, spec.sigma)
    
    One RNG stream per trajectory index, so the result does not depend on
    processing order.
    """
    if spec.level == 0 or not trajectories:
        return list(trajectories)
    
    scale = mean_ranges(trajectories)
    streams = np.random.SeedSequence(spec.seed).spawn(len(trajectories))
    
    noisy = []
    for trajectory, stream in zip(trajectories, streams):
        rng = np.random.default_rng(stream)
        unit = rng.normal(0.0, spec.sigma, size=trajectory.states.shape)
        states = trajectory.states + unit * scale
        noisy.append(Trajectory(times=trajectory.times, states=states, ic=states[0].copy()))
    
    logger.debug(f"Added noise (level={spec.level}, sigma={spec.sigma}) with mean ranges {scale}")
    return noisy
