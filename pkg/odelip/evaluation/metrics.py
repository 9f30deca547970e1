"""Generalization and recovery metrics"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from odelip.config import Config
from odelip.core.dynamics import RhsSystem
from odelip.core.errors import InputError, NormalizationError
from odelip.core.network import MlpParams
from odelip.model.mlp import predict
from odelip.systems.catalog import eval_rhs_batch

logger = logging.getLogger(__name__)

Model = Union[MlpParams, Callable[[np.ndarray], np.ndarray]]


def generalization_gap(train_mse_abs: float, test_mse_abs: float) -> float:
    """Test MSE minus train MSE"""
    if not (math.isfinite(train_mse_abs) and math.isfinite(test_mse_abs)):
        raise InputError(f"Generalization gap needs finite MSEs, got {train_mse_abs}, {test_mse_abs}")
    return test_mse_abs - train_mse_abs


def hoeffding_bound(m: int, eps: float) -> float:
    """P(|E_rho - E_test| > eps) <= 2 exp(-2 eps^2 m) for m test points"""
    if m < 1:
        raise InputError(f"Hoeffding bound needs m >= 1, got {m}")
    if not eps > 0:
        raise InputError(f"Hoeffding bound needs eps > 0, got {eps}")
    return 2.0 * math.exp(-2.0 * eps * eps * m)


def evaluate_model(model: Model, points: np.ndarray) -> np.ndarray:
    """Network parameters or any callable mapping (n, 1+d) points to (n, k) values"""
    if isinstance(model, MlpParams):
        return predict(model, points)
    values = np.asarray(model(points), dtype=np.float64)
    return values[:, None] if values.ndim == 1 else values


def error_field(model: Model, points, reference) -> np.ndarray:
    """Per-point |N(t, x) - reference|, in input order"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    reference = np.asarray(reference, dtype=np.float64)
    if reference.ndim == 1:
        reference = reference[:, None]
    values = evaluate_model(model, points)
    if values.shape != reference.shape:
        raise InputError(f"Model output shape {values.shape} does not match reference {reference.shape}")
    return np.linalg.norm(values - reference, axis=1)


@dataclass(frozen=True)
class GridSpec:
    """Regular recovery grid: nt time points by nx points per state component"""
    nt: int = Config.GRID_NT
    nx: int = Config.GRID_NX
    time_range: Optional[Tuple[float, float]] = None  # defaults to the system's domain
    state_box: Optional[Tuple[Tuple[float, float], ...]] = None


def recovery_grid(system: RhsSystem, grid: GridSpec = GridSpec()) -> np.ndarray:
    """(nt * nx^d, 1 + d) grid points over the system's recovery domain"""
    default_time, default_box = system.recovery_domain()
    t_range = grid.time_range or default_time
    box = grid.state_box or default_box
    if len(box) != system.dim:
        raise InputError(f"State box has {len(box)} ranges for dimension {system.dim}")
    axes = [np.linspace(*t_range, grid.nt)] + [np.linspace(lo, hi, grid.nx) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def reference_values(system: RhsSystem, points: np.ndarray, component: Optional[int] = None) -> np.ndarray:
    values = eval_rhs_batch(system, points)
    return values if component is None else values[:, [component]]


def recovery_error_on_points(
    model: Model,
    system: RhsSystem,
    points,
    pointwise_relative: bool = False,
    component: Optional[int] = None,
) -> float:
    """
    Relative deviation of the model from f on arbitrary points, in percent
    
    Default is ratio of means, mean |N - f| / mean |f|; pointwise_relative
    uses mean(|N - f| / (|f| + floor)) instead.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    reference = reference_values(system, points, component)
    errors = error_field(model, points, reference)
    magnitudes = np.linalg.norm(reference, axis=1)
    if pointwise_relative:
        return 100.0 * float(np.mean(errors / (magnitudes + Config.RELATIVE_FLOOR)))
    scale = float(np.mean(magnitudes))
    if scale == 0:
        raise NormalizationError(f"f vanishes on the whole grid of '{system.id}'")
    return 100.0 * float(np.mean(errors)) / scale


def recovery_error(
    model: Model,
    system: RhsSystem,
    grid: GridSpec = GridSpec(),
    pointwise_relative: bool = False,
    component: Optional[int] = None,
) -> float:
    """Recovery error on the regular grid over the system's domain, in percent"""
    points = recovery_grid(system, grid)
    value = recovery_error_on_points(model, system, points, pointwise_relative, component)
    logger.debug(f"Recovery error on {len(points)} grid points of '{system.id}': {value:.4f}%")
    return value
