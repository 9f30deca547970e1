"""Fixed-step fourth-order Runge-Kutta integration"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from odelip.config import Config
from odelip.core.dynamics import RhsSystem, Trajectory
from odelip.core.errors import InputError, IntegrationError

logger = logging.getLogger(__name__)


def rk4_step(system: RhsSystem, t: float, x: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of size h"""
    f = system.rhs
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def integrate(system: RhsSystem, x0, substeps: int = Config.RK4_SUBSTEPS) -> Trajectory:
    """
    Solve x' = f(t, x) from x(t_start) = x0 on the system's sample grid
    
    Args:
        system: System to integrate
        x0: Initial condition of length d (need not lie in the IC box)
        substeps: Internal RK4 steps per output step dt
    
    Returns:
        Trajectory sampled at t_start + j*dt
    """
    if substeps < 1:
        raise InputError(f"substeps must be >= 1, got {substeps}")
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (system.dim,):
        raise InputError(f"System '{system.id}' expects an initial condition of length {system.dim}")
    
    times = system.sample_times()
    h = system.dt / substeps
    states = np.empty((len(times), system.dim))
    states[0] = x0
    
    x = x0.copy()
    for j in range(1, len(times)):
        # each output interval restarts from the constructed grid time
        t0 = times[j - 1]
        for s in range(substeps):
            t = t0 + s * h
            x = np.asarray(rk4_step(system, t, x, h), dtype=np.float64).reshape(system.dim)
            if not np.all(np.isfinite(x)):
                raise IntegrationError(f"System '{system.id}' blew up", time=t + h)
        states[j] = x
    
    return Trajectory(times=times, states=states, ic=x0.copy())


def integrate_many(
    system: RhsSystem,
    initial_conditions: Sequence[np.ndarray],
    substeps: int = Config.RK4_SUBSTEPS,
    workers: Optional[int] = None,
) -> List[Trajectory]:
    """Integrate several initial conditions, results in input order"""
    if workers is None or workers <= 1:
        trajectories = [integrate(system, x0, substeps) for x0 in initial_conditions]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trajectories = list(pool.map(lambda x0: integrate(system, x0, substeps), initial_conditions))
    logger.debug(f"Integrated {len(trajectories)} trajectories of '{system.id}'")
    return trajectories
