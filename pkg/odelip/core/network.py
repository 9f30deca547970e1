"""Network parameter containers"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from odelip.config import Config
from odelip.core.errors import InputError


def flat_size(layer_sizes: Tuple[int, ...]) -> int:
    """Parameter count sum(n_out * (n_in + 1)) of a layer layout"""
    return sum(n_out * (n_in + 1) for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]))


@dataclass
class MlpParams:
    """Weights W_i (n_i x n_{i-1}) and biases b_i of an LReLU feed-forward network"""
    layer_sizes: Tuple[int, ...]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    lrelu_eps: float = Config.LRELU_EPS
    
    def __post_init__(self):
        self.layer_sizes = tuple(int(n) for n in self.layer_sizes)
        if len(self.layer_sizes) < 2:
            raise InputError(f"Need at least input and output sizes, got {self.layer_sizes}")
        if len(self.weights) != self.n_layers or len(self.biases) != self.n_layers:
            raise InputError(
                f"Expected {self.n_layers} layers, got {len(self.weights)} weights "
                f"and {len(self.biases)} biases"
            )
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.layer_sizes[i + 1], self.layer_sizes[i])
            if w.shape != expected:
                raise InputError(f"Layer {i + 1}: weight shape {w.shape}, expected {expected}")
            if b.shape != (expected[0],):
                raise InputError(f"Layer {i + 1}: bias shape {b.shape}, expected ({expected[0]},)")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise InputError(f"Layer {i + 1}: non-finite parameters")
        if not 0 < self.lrelu_eps < 1:
            raise InputError(f"LReLU slope must lie in (0, 1), got {self.lrelu_eps}")
    
    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes) - 1
    
    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]
    
    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]
    
    def copy(self) -> "MlpParams":
        return MlpParams(
            layer_sizes=self.layer_sizes,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            lrelu_eps=self.lrelu_eps,
        )
    
    def step(self, grads: "Gradients", lr: float) -> "MlpParams":
        """Return params - lr * grads"""
        return MlpParams(
            layer_sizes=self.layer_sizes,
            weights=[w - lr * g for w, g in zip(self.weights, grads.weights)],
            biases=[b - lr * g for b, g in zip(self.biases, grads.biases)],
            lrelu_eps=self.lrelu_eps,
        )
    
    def ravel(self) -> np.ndarray:
        """All parameters as one flat vector (W_1, b_1, W_2, b_2, ...)"""
        return np.concatenate([a.ravel() for w, b in zip(self.weights, self.biases) for a in (w, b)])
    
    def with_flat(self, flat: np.ndarray) -> "MlpParams":
        """Params of the same shape filled from a flat vector"""
        grads = Gradients.from_flat(self.layer_sizes, flat)
        return MlpParams(self.layer_sizes, grads.weights, grads.biases, self.lrelu_eps)


@dataclass
class Gradients:
    """Parameter-shaped gradient"""
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    
    @classmethod
    def zeros_like(cls, params: MlpParams) -> "Gradients":
        return cls(
            weights=[np.zeros_like(w) for w in params.weights],
            biases=[np.zeros_like(b) for b in params.biases],
        )
    
    @classmethod
    def from_flat(cls, layer_sizes: Tuple[int, ...], flat: np.ndarray) -> "Gradients":
        flat = np.asarray(flat, dtype=np.float64)
        needed = flat_size(layer_sizes)
        if flat.ndim != 1 or len(flat) != needed:
            raise InputError(f"Flat vector has shape {flat.shape}, layout needs ({needed},)")
        weights, biases = [], []
        offset = 0
        for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            weights.append(flat[offset:offset + n_out * n_in].reshape(n_out, n_in).copy())
            offset += n_out * n_in
            biases.append(flat[offset:offset + n_out].copy())
            offset += n_out
        return cls(weights=weights, biases=biases)
    
    def __add__(self, other: "Gradients") -> "Gradients":
        return Gradients(
            weights=[a + b for a, b in zip(self.weights, other.weights)],
            biases=[a + b for a, b in zip(self.biases, other.biases)],
        )
    
    def scaled(self, factor: float) -> "Gradients":
        return Gradients(
            weights=[factor * w for w in self.weights],
            biases=[factor * b for b in self.biases],
        )
    
    def ravel(self) -> np.ndarray:
        return np.concatenate([a.ravel() for w, b in zip(self.weights, self.biases) for a in (w, b)])
    
    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in (*self.weights, *self.biases))


@dataclass
class ForwardTape:
    """Per-layer cache of one forward pass, consumed by backward"""
    layer_inputs: List[np.ndarray] = field(default_factory=list)  # a_0 .. a_{L-1}
    pre_activations: List[np.ndarray] = field(default_factory=list)  # z_1 .. z_L
    
    @property
    def n_layers(self) -> int:
        return len(self.pre_activations)
