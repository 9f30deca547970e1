"""End-to-end generation of training/testing sample pairs"""

import logging
from typing import Optional, Sequence

import numpy as np

from odelip.config import Config
from odelip.core.dataset import Dataset, NoiseSpec, Provenance, SampleSet
from odelip.core.dynamics import RhsSystem, Trajectory
from odelip.core.errors import InputError
from odelip.data.derivatives import estimate_derivatives, odd_extend
from odelip.data.noise import add_noise, mean_ranges, sample_initial_conditions
from odelip.data.smoothing import default_roughness, fit_smoothing_curve
from odelip.systems.integrator import integrate_many

logger = logging.getLogger(__name__)

SMOOTH_THEN_EXTEND = "smooth_then_extend"
EXTEND_THEN_SMOOTH = "extend_then_smooth"
SMOOTHING_ORDERS = (SMOOTH_THEN_EXTEND, EXTEND_THEN_SMOOTH)


def smoothed_extension(
    times: np.ndarray,
    values: np.ndarray,
    noise_std: float,
    p: int = Config.EXTENSION_DEPTH,
    order: str = SMOOTH_THEN_EXTEND,
) -> np.ndarray:
    """Smoothed samples of one component on the grid extended by p steps per side"""
    if order == SMOOTH_THEN_EXTEND:
        lam = default_roughness(times, values, noise_std)
        curve = fit_smoothing_curve(times, values, lam)
        # odd reflection of the fitted curve through its endpoint values
        return odd_extend(curve(times), p)
    if order == EXTEND_THEN_SMOOTH:
        ext_times = odd_extend(times, p)
        ext_values = odd_extend(values, p)
        lam = default_roughness(ext_times, ext_values, noise_std)
        return fit_smoothing_curve(ext_times, ext_values, lam)(ext_times)
    raise InputError(f"Unknown smoothing order '{order}', expected one of {SMOOTHING_ORDERS}")


def trajectory_targets(
    trajectory: Trajectory,
    dt: float,
    noise_std: Optional[np.ndarray] = None,
    p: int = Config.EXTENSION_DEPTH,
    order: str = SMOOTH_THEN_EXTEND,
) -> np.ndarray:
    """
    (M, d) derivative targets for one trajectory
    
    Noiseless data (noise_std None) is odd-extended directly; noisy data is
    smoothed per component first.
    """
    if noise_std is None:
        return estimate_derivatives(odd_extend(trajectory.states, p), dt, p)
    columns = [
        estimate_derivatives(
            smoothed_extension(trajectory.times, trajectory.states[:, k], noise_std[k], p, order),
            dt,
            p,
        )
        for k in range(trajectory.dim)
    ]
    return np.column_stack(columns)


def assemble_pairs(trajectories: Sequence[Trajectory], targets: Sequence[np.ndarray]) -> SampleSet:
    """Stack (t_j, x_i(t_j)) inputs and targets in order h = j + i*M"""
    inputs = np.vstack([np.column_stack([tr.times, tr.states]) for tr in trajectories])
    return SampleSet(inputs=inputs, targets=np.vstack(targets))


def split_index(n: int, split_seed: int, train_fraction: float = Config.TRAIN_FRACTION):
    """Shuffle 0..n-1 and cut it into train and test positions"""
    if not 0 < train_fraction < 1:
        raise InputError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    order = np.random.default_rng(split_seed).permutation(n)
    n_train = int(round(train_fraction * n))
    return order[:n_train], order[n_train:]


def build_dataset(
    system: RhsSystem,
    spec: NoiseSpec,
    split_seed: int,
    ic_seed: int = 0,
    substeps: int = Config.RK4_SUBSTEPS,
    smoothing_order: str = SMOOTH_THEN_EXTEND,
    train_fraction: float = Config.TRAIN_FRACTION,
    workers: Optional[int] = None,
) -> Dataset:
    """
    Integrate, add noise, estimate derivatives and split 80/20
    
    Inputs are always the (possibly noisy) samples themselves; smoothing only
    feeds the derivative targets.
    """
    if smoothing_order not in SMOOTHING_ORDERS:
        raise InputError(f"Unknown smoothing order '{smoothing_order}'")
    
    initial_conditions = sample_initial_conditions(system, ic_seed)
    clean = integrate_many(system, initial_conditions, substeps=substeps, workers=workers)
    noisy = add_noise(clean, spec)
    
    noise_std = spec.sigma * mean_ranges(clean) if spec.level > 0 else None
    targets = [
        trajectory_targets(tr, system.dt, noise_std, Config.EXTENSION_DEPTH, smoothing_order)
        for tr in noisy
    ]
    pairs = assemble_pairs(noisy, targets)
    
    train_index, test_index = split_index(len(pairs), split_seed, train_fraction)
    dataset = Dataset(
        train=pairs.take(train_index),
        test=pairs.take(test_index),
        dim=system.dim,
        noise=spec,
        provenance=Provenance(
            system_id=system.id,
            ic_seed=ic_seed,
            split_seed=split_seed,
            dt=system.dt,
            n_ic=system.n_ic,
            n_times=system.n_times,
            smoothing_order=smoothing_order,
            substeps=substeps,
            extension_depth=Config.EXTENSION_DEPTH,
            train_fraction=train_fraction,
        ),
        train_index=train_index,
        test_index=test_index,
    )
    
    logger.info(
        f"Built dataset for '{system.id}' (noise={spec.level}): "
        f"{len(dataset.train)} train / {len(dataset.test)} test pairs"
    )
    return dataset
