"""Model package initialization"""

from odelip.model.mlp import lrelu, init_params, forward, backward, predict
from odelip.model.checkpoint import save_checkpoint, load_checkpoint
from odelip.model.lipschitz import (
    ProbeSet,
    LipEstimate,
    sample_probe_set,
    estimate_lipschitz,
    lipschitz_subgradient,
    estimator_calls,
)

__all__ = [
    "lrelu",
    "init_params",
    "forward",
    "backward",
    "predict",
    "save_checkpoint",
    "load_checkpoint",
    "ProbeSet",
    "LipEstimate",
    "sample_probe_set",
    "estimate_lipschitz",
    "lipschitz_subgradient",
    "estimator_calls",
]
