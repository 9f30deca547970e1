"""Odd extension and difference quotients"""

import numpy as np

from odelip.config import Config
from odelip.core.errors import InputError


def odd_extend(values, p: int = Config.EXTENSION_DEPTH) -> np.ndarray:
    """
    Reflect samples through both endpoints
    
    v(t0 - q*dt) = 2 v(t0) - v(t0 + q*dt) for q = 1..p, and the mirror image
    on the right. Works along axis 0, so (M,) and (M, d) inputs are accepted.
    """
    values = np.asarray(values, dtype=np.float64)
    if p < 0:
        raise InputError(f"Extension count must be >= 0, got {p}")
    m = len(values)
    if m <= p:
        raise InputError(f"Cannot extend {m} samples by {p}: need at least {p + 1}")
    if p == 0:
        return values.copy()
    left = 2.0 * values[0] - values[p:0:-1]
    right = 2.0 * values[-1] - values[-2:-2 - p:-1]
    return np.concatenate([left, values, right], axis=0)


def estimate_derivatives(values, dt: float, p: int = Config.EXTENSION_DEPTH) -> np.ndarray:
    """
    Central differences (v[j+1] - v[j-1]) / (2 dt) at the original indices
    of a sequence extended by p samples on each side
    """
    values = np.asarray(values, dtype=np.float64)
    if dt <= 0:
        raise InputError(f"dt must be positive, got {dt}")
    if p < 1:
        raise InputError("Central differences need at least one extension sample per side")
    m = len(values) - 2 * p
    if m < 1:
        raise InputError(f"Sequence of length {len(values)} is too short for extension depth {p}")
    return (values[p + 1:p + 1 + m] - values[p - 1:p - 1 + m]) / (2.0 * dt)
