"""Descent rules turning one minibatch gradient into a parameter step"""

import copy
import logging
from typing import List, Optional, Union

import numpy as np

from odelip.core.errors import InputError
from odelip.core.network import Gradients
from odelip.core.training import TrainConfig

logger = logging.getLogger(__name__)

ADAM_EPS = 1e-8


class GradientDescent:
    """Plain minibatch descent, optionally with heavy-ball momentum"""
    
    def __init__(self, momentum: float = 0.0):
        self.momentum = momentum
        self.velocity: Optional[Gradients] = None
    
    def direction(self, grads: Gradients) -> Gradients:
        if self.momentum == 0:
            return grads
        if self.velocity is None:
            self.velocity = grads
        else:
            self.velocity = self.velocity.scaled(self.momentum) + grads
        return self.velocity
    
    def snapshot(self) -> "GradientDescent":
        return copy.deepcopy(self)


class Adam:
    """
    Adaptive moment estimation
    
    Keeps running first and second moments of the gradient per parameter and
    steps along m_hat / (sqrt(v_hat) + eps), with both moments bias-corrected
    by the number of steps taken so far.
    """
    
    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = ADAM_EPS):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.steps = 0
        self.first: Optional[List[np.ndarray]] = None
        self.second: Optional[List[np.ndarray]] = None
    
    def direction(self, grads: Gradients) -> Gradients:
        arrays = [*grads.weights, *grads.biases]
        if self.first is None:
            self.first = [np.zeros_like(a) for a in arrays]
            self.second = [np.zeros_like(a) for a in arrays]
        
        self.steps += 1
        b1, b2 = self.beta1, self.beta2
        self.first = [b1 * m + (1.0 - b1) * g for m, g in zip(self.first, arrays)]
        self.second = [b2 * v + (1.0 - b2) * g * g for v, g in zip(self.second, arrays)]
        c1 = 1.0 - b1 ** self.steps
        c2 = 1.0 - b2 ** self.steps
        moves = [(m / c1) / (np.sqrt(v / c2) + self.eps) for m, v in zip(self.first, self.second)]
        
        n = len(grads.weights)
        return Gradients(weights=moves[:n], biases=moves[n:])
    
    def snapshot(self) -> "Adam":
        return copy.deepcopy(self)


Optimizer = Union[GradientDescent, Adam]


def make_optimizer(config: TrainConfig) -> Optimizer:
    """Fresh optimizer state for one run"""
    logger.debug(f"Optimizer {config.optimizer} for alpha={config.alpha:g}")
    if config.optimizer == "adam":
        return Adam(config.adam_beta1, config.adam_beta2)
    if config.optimizer == "sgd":
        return GradientDescent(config.momentum)
    raise InputError(f"Unknown optimizer '{config.optimizer}'")
