"""Systems package initialization"""

from odelip.systems.catalog import (
    builtin_systems,
    oracle_systems,
    get_system,
    eval_rhs,
    eval_rhs_batch,
)
from odelip.systems.integrator import integrate, integrate_many, rk4_step

__all__ = [
    "builtin_systems",
    "oracle_systems",
    "get_system",
    "eval_rhs",
    "eval_rhs_batch",
    "integrate",
    "integrate_many",
    "rk4_step",
]
