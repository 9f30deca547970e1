"""LReLU feed-forward network with reverse-mode gradients"""

import logging
from typing import Sequence, Tuple

import numpy as np

from odelip.config import Config
from odelip.core.errors import InputError
from odelip.core.network import ForwardTape, Gradients, MlpParams

logger = logging.getLogger(__name__)

PREDICT_CHUNK = 65536


def lrelu(z, eps: float = Config.LRELU_EPS):
    """eps*z for z < 0, z for z >= 0"""
    z = np.asarray(z, dtype=np.float64)
    return np.where(z >= 0, z, eps * z)


def lrelu_grad(z, eps: float = Config.LRELU_EPS) -> np.ndarray:
    # the z >= 0 branch owns z == 0
    return np.where(np.asarray(z) >= 0, 1.0, eps)


def init_params(layer_sizes: Sequence[int], seed: int, lrelu_eps: float = Config.LRELU_EPS) -> MlpParams:
    """
    Uniform variance-preserving initialization
    
    W_i ~ U[-a, a] with a = sqrt(6 / (n_{i-1} + n_i)); biases are zero.
    """
    sizes = tuple(int(n) for n in layer_sizes)
    if len(sizes) < 2:
        raise InputError(f"Need at least two layer sizes, got {sizes}")
    if any(n <= 0 for n in sizes):
        raise InputError(f"Layer sizes must be positive, got {sizes}")
    
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (n_in + n_out))
        weights.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
        biases.append(np.zeros(n_out))
    return MlpParams(layer_sizes=sizes, weights=weights, biases=biases, lrelu_eps=lrelu_eps)


def forward(params: MlpParams, batch) -> Tuple[np.ndarray, ForwardTape]:
    """
    Evaluate N on a (B, n_0) batch
    
    Hidden layers apply LReLU; the last layer is affine only.
    
    Returns:
        (B, n_L) outputs and the tape for backward
    """
    a = np.asarray(batch, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != params.input_dim:
        raise InputError(f"Batch must have shape (B, {params.input_dim}), got {a.shape}")
    
    tape = ForwardTape()
    last = params.n_layers - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        tape.layer_inputs.append(a)
        z = a @ w.T + b
        tape.pre_activations.append(z)
        a = z if i == last else lrelu(z, params.lrelu_eps)
    return a, tape


def backward(params: MlpParams, tape: ForwardTape, upstream) -> Tuple[Gradients, np.ndarray]:
    """
    Gradients of sum(upstream * output) w.r.t. parameters and inputs
    
    Returns:
        (parameter gradients, (B, n_0) input gradients)
    """
    if tape.n_layers != params.n_layers:
        raise InputError(f"Tape has {tape.n_layers} layers, params have {params.n_layers}")
    delta = np.asarray(upstream, dtype=np.float64)
    expected = tape.pre_activations[-1].shape
    if delta.shape != expected:
        raise InputError(f"Upstream shape {delta.shape} does not match output shape {expected}")
    
    grad_w = [None] * params.n_layers
    grad_b = [None] * params.n_layers
    for i in reversed(range(params.n_layers)):
        if i < params.n_layers - 1:
            delta = delta * lrelu_grad(tape.pre_activations[i], params.lrelu_eps)
        grad_w[i] = delta.T @ tape.layer_inputs[i]
        grad_b[i] = delta.sum(axis=0)
        delta = delta @ params.weights[i]
    return Gradients(weights=grad_w, biases=grad_b), delta


def predict(params: MlpParams, points) -> np.ndarray:
    """Forward pass without a tape, chunked for large grids"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if len(points) <= PREDICT_CHUNK:
        return forward(params, points)[0]
    return np.vstack([
        forward(params, points[start:start + PREDICT_CHUNK])[0]
        for start in range(0, len(points), PREDICT_CHUNK)
    ])
