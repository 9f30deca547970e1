"""Binary parameter checkpoints"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from odelip.core.errors import CheckpointError
from odelip.core.network import MlpParams

logger = logging.getLogger(__name__)

MAGIC = b"ODELIPCK"
VERSION = 1

PathLike = Union[str, Path]


def save_checkpoint(params: MlpParams, path: PathLike) -> Path:
    """
    Layout (little-endian): magic, uint32 version, float64 LReLU slope,
    uint32 layer count L, uint32 sizes n_0..n_L, then per layer the
    row-major float64 weights followed by the biases
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IdI", VERSION, params.lrelu_eps, params.n_layers))
        f.write(np.asarray(params.layer_sizes, dtype="<u4").tobytes())
        for w, b in zip(params.weights, params.biases):
            f.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
            f.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
    logger.debug(f"Checkpoint written to {path}")
    return path


def load_checkpoint(path: PathLike) -> MlpParams:
    """Read a checkpoint written by save_checkpoint"""
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"Checkpoint not found: {path}")
    blob = path.read_bytes()
    
    if not blob.startswith(MAGIC):
        raise CheckpointError(f"{path} is not an odelip checkpoint")
    offset = len(MAGIC)
    header = struct.calcsize("<IdI")
    if len(blob) < offset + header:
        raise CheckpointError(f"{path} is truncated")
    version, eps, n_layers = struct.unpack_from("<IdI", blob, offset)
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    offset += header
    
    try:
        sizes = np.frombuffer(blob, dtype="<u4", count=n_layers + 1, offset=offset).astype(int)
        offset += 4 * (n_layers + 1)
        weights, biases = [], []
        for n_in, n_out in zip(sizes[:-1], sizes[1:]):
            w = np.frombuffer(blob, dtype="<f8", count=n_out * n_in, offset=offset)
            offset += 8 * n_out * n_in
            b = np.frombuffer(blob, dtype="<f8", count=n_out, offset=offset)
            offset += 8 * n_out
            weights.append(w.reshape(n_out, n_in).astype(np.float64))
            biases.append(b.astype(np.float64))
    except ValueError as e:
        raise CheckpointError(f"{path} is truncated: {e}") from e
    if offset != len(blob):
        raise CheckpointError(f"{path} has {len(blob) - offset} trailing bytes")
    
    return MlpParams(layer_sizes=tuple(sizes), weights=weights, biases=biases, lrelu_eps=eps)
