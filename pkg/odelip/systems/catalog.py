"""Catalog of right-hand sides with known closed forms"""

import logging
from typing import Dict, List

import numpy as np

from odelip.core.dynamics import RhsSystem
from odelip.core.errors import DomainError, InputError

logger = logging.getLogger(__name__)

DT = 0.5


def _xcosx(t: float, x: np.ndarray) -> np.ndarray:
    return x * np.cos(x)


def _explog(t: float, x: np.ndarray) -> np.ndarray:
    return np.exp(-x) * np.log(t) - t ** 2


def _lotka_volterra(t: float, x: np.ndarray) -> np.ndarray:
    x1, x2 = x
    return np.array([1.5 * x1 - x1 * x2, -3.0 * x2 + x1 * x2])


def _pendulum(t: float, x: np.ndarray) -> np.ndarray:
    # z'' + 2z' + 2z = cos(2t) with x1 = z, x2 = z'
    x1, x2 = x
    return np.array([x2, -2.0 * x1 - 2.0 * x2 + np.cos(2.0 * t)])


def _decay(t: float, x: np.ndarray) -> np.ndarray:
    return -x


def _still(t: float, x: np.ndarray) -> np.ndarray:
    return np.zeros_like(x)


def builtin_systems() -> List[RhsSystem]:
    """The four reference experiments with their default sampling protocol"""
    return [
        RhsSystem(
            id="xcosx",
            dim=1,
            rhs=_xcosx,
            time_interval=(0.0, 3.0),
            dt=DT,
            ic_box=((-2.5, 2.5),),
            n_ic=200,
        ),
        RhsSystem(
            id="explog",
            dim=1,
            rhs=_explog,
            time_interval=(0.1, 2.0),
            dt=DT,
            ic_box=((0.5, 5.0),),
            n_ic=200,
            requires_positive_time=True,
            recovery_box=((-1.5, 5.0),),
        ),
        RhsSystem(
            id="lotka_volterra",
            dim=2,
            rhs=_lotka_volterra,
            time_interval=(0.0, 4.0),
            dt=DT,
            ic_box=((1.0, 5.0), (1.0, 5.0)),
            n_ic=400,
        ),
        RhsSystem(
            id="pendulum",
            dim=2,
            rhs=_pendulum,
            time_interval=(0.0, 2.0),
            dt=DT,
            ic_box=((0.0, 2.0), (0.0, 2.0)),
            n_ic=1000,
        ),
    ]


def oracle_systems() -> List[RhsSystem]:
    """Oracle systems with analytic solutions, kept out of builtin_systems"""
    return [
        RhsSystem(id="decay", dim=1, rhs=_decay, time_interval=(0.0, 1.0), dt=DT,
                  ic_box=((0.5, 1.5),), n_ic=10),
        RhsSystem(id="still", dim=1, rhs=_still, time_interval=(0.0, 1.0), dt=DT,
                  ic_box=((-1.0, 1.0),), n_ic=10),
    ]


def _registry() -> Dict[str, RhsSystem]:
    return {system.id: system for system in builtin_systems() + oracle_systems()}


def get_system(system_id: str) -> RhsSystem:
    """Look a system up by id (builtins and oracle systems)"""
    registry = _registry()
    if system_id not in registry:
        raise InputError(f"Unknown system '{system_id}', known: {sorted(registry)}")
    return registry[system_id]


def eval_rhs(system: RhsSystem, t: float, x) -> np.ndarray:
    """f(t, x) in float64"""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (system.dim,):
        raise InputError(f"System '{system.id}' expects a state of length {system.dim}, got shape {x.shape}")
    if system.requires_positive_time and not t > 0:
        raise DomainError(f"System '{system.id}' is undefined at t={t}")
    return np.asarray(system.rhs(t, x), dtype=np.float64).reshape(system.dim)


def eval_rhs_batch(system: RhsSystem, points: np.ndarray) -> np.ndarray:
    """f on rows (t, x1..xd) of a point matrix"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[1] != system.dim + 1:
        raise InputError(f"Points must have {system.dim + 1} columns, got {points.shape[1]}")
    t = points[:, 0]
    if system.requires_positive_time and np.any(t <= 0):
        raise DomainError(f"System '{system.id}' is undefined for t <= 0")
    # the closed forms broadcast over a (d, n) state block
    values = system.rhs(t, points[:, 1:].T)
    return np.asarray(values, dtype=np.float64).reshape(system.dim, -1).T
