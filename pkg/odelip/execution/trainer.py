"""Regularized loss and minibatch gradient descent"""

import logging
import math
from dataclasses import replace
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from odelip.core.dataset import Dataset, SamplePair, SampleSet
from odelip.core.errors import DivergenceError, InputError, NormalizationError
from odelip.core.network import Gradients, MlpParams
from odelip.core.training import EpochStats, StopRule, TrainConfig, TrainRecord
from odelip.execution.optimizer import Optimizer, make_optimizer
from odelip.model.lipschitz import (
    ProbeSet,
    estimate_lipschitz,
    lipschitz_value_and_subgradient,
    sample_probe_set,
)
from odelip.model.mlp import backward, forward, init_params

logger = logging.getLogger(__name__)

Pairs = Union[SampleSet, Sequence[SamplePair]]

SETTLE_ITERATIONS = 60


def as_sample_set(pairs: Pairs) -> SampleSet:
    if isinstance(pairs, SampleSet):
        return pairs
    return SampleSet.from_pairs(list(pairs))


def _squared_residuals(params: MlpParams, block: SampleSet) -> np.ndarray:
    outputs, _ = forward(params, block.inputs)
    return np.sum((block.targets - outputs) ** 2, axis=1)


def mse(params: MlpParams, pairs: Pairs) -> float:
    """Mean over pairs of |Y_h - N(X_h)|^2"""
    block = as_sample_set(pairs)
    if len(block) == 0:
        raise InputError("mse needs at least one pair")
    return float(np.mean(_squared_residuals(params, block)))


def relative_mse(params: MlpParams, pairs: Pairs) -> float:
    """100 * sum |Y - N(X)|^2 / sum |Y|^2"""
    block = as_sample_set(pairs)
    if len(block) == 0:
        raise InputError("relative_mse needs at least one pair")
    scale = float(np.sum(block.targets ** 2))
    if scale == 0:
        raise NormalizationError("Relative MSE is undefined for all-zero targets")
    return 100.0 * float(np.sum(_squared_residuals(params, block))) / scale


def _relative_or_nan(params: MlpParams, block: SampleSet) -> float:
    try:
        return relative_mse(params, block)
    except NormalizationError:
        return math.nan


def loss_terms(
    params: MlpParams,
    batch: SampleSet,
    alpha: float,
    probe: Optional[ProbeSet] = None,
) -> Tuple[float, float, Gradients]:
    """
    (batch MSE, Lipschitz estimate on probe, gradient of MSE + alpha * estimate)
    
    The regularizer is differentiated at the frozen argmax pair. With
    alpha == 0 no Lipschitz work is done and the estimate is NaN.
    """
    if len(batch) == 0:
        raise InputError("Loss needs a non-empty batch")
    outputs, tape = forward(params, batch.inputs)
    residual = batch.targets - outputs
    batch_mse = float(np.mean(np.sum(residual ** 2, axis=1)))
    grads, _ = backward(params, tape, -2.0 * residual / len(batch))
    
    if alpha == 0:
        return batch_mse, math.nan, grads
    if probe is None:
        raise InputError("A probe set is required when alpha > 0")
    
    estimate = estimate_lipschitz(params, probe)
    a, b = estimate.argmax_pair
    _, lip_grads = lipschitz_value_and_subgradient(params, probe.points[a], probe.points[b])
    return batch_mse, estimate.value, grads + lip_grads.scaled(alpha)


def total_loss(
    params: MlpParams,
    batch: Pairs,
    alpha: float,
    probe: Optional[ProbeSet] = None,
) -> Tuple[float, Gradients]:
    """MSE + alpha * Lip(N) on one batch, with its parameter gradient"""
    batch_mse, lip, grads = loss_terms(params, as_sample_set(batch), alpha, probe)
    loss = batch_mse if alpha == 0 else batch_mse + alpha * lip
    return loss, grads


def learning_rate(config: TrainConfig, epoch: int) -> float:
    """Staircase schedule: lr0 * decay_factor ** floor((epoch - 1) / decay_period)"""
    return config.lr0 * config.decay_factor ** ((epoch - 1) // config.decay_period)


def _descend(params: MlpParams, direction: Gradients, lr: float, epoch: int) -> MlpParams:
    if lr == 0:
        return params
    try:
        return params.step(direction, lr)
    except InputError as e:
        raise DivergenceError(f"Parameters became non-finite: {e}", epoch=epoch) from e


Watch = Callable[[MlpParams, MlpParams], Optional[MlpParams]]


def _run_epoch(
    params: MlpParams,
    optimizer: Optimizer,
    block: SampleSet,
    config: TrainConfig,
    epoch: int,
    probe: Optional[ProbeSet],
    watch: Optional[Watch] = None,
) -> MlpParams:
    """
    One shuffled pass over the training pairs
    
    `watch(before, after)` runs after every step; a non-None return ends the
    pass early with those parameters.
    """
    lr = learning_rate(config, epoch)
    n = len(block)
    order = np.random.default_rng([config.shuffle_seed, epoch]).permutation(n)
    step_rng = np.random.default_rng([config.probe_seed, epoch])
    
    for start in range(0, n, config.batch_size):
        batch = block.take(order[start:start + config.batch_size])
        step_probe = probe.subsample(step_rng, config.step_probe_n) if probe is not None else None
        loss, grads = total_loss(params, batch, config.alpha, step_probe)
        if not math.isfinite(loss) or not grads.is_finite():
            raise DivergenceError("Non-finite loss", epoch=epoch)
        before = params
        params = _descend(params, optimizer.direction(grads), lr, epoch)
        if watch is not None:
            stopped = watch(before, params)
            if stopped is not None:
                return stopped
    return params


def _between(before: MlpParams, after: MlpParams, s: float) -> MlpParams:
    """before + s * (after - before)"""
    delta = Gradients(
        weights=[a - b for a, b in zip(after.weights, before.weights)],
        biases=[a - b for a, b in zip(after.biases, before.biases)],
    )
    return before.step(delta, -s)


def settle_on_step(before: MlpParams, after: MlpParams, block: SampleSet, stop: StopRule) -> Optional[MlpParams]:
    """
    Point on the step before -> after whose train MSE rounds to the target
    
    `before` must sit above the target window and `after` below it. Bisection
    keeps that bracket, so it closes in on a crossing and stops as soon as the
    MSE rounds to the target. Returns None if the bracket does not hold.
    """
    if not (stop.above(mse(before, block)) and stop.overshot(mse(after, block))):
        return None
    lo, hi = 0.0, 1.0
    for _ in range(SETTLE_ITERATIONS):
        s = 0.5 * (lo + hi)
        candidate = _between(before, after, s)
        value = mse(candidate, block)
        if stop.matches(value):
            return candidate
        if value > stop.target_mse:
            lo = s
        else:
            hi = s
    return None


def train(
    config: TrainConfig,
    dataset: Union[Dataset, SampleSet],
    stop: Optional[StopRule] = None,
    component: Optional[int] = None,
) -> Tuple[MlpParams, TrainRecord]:
    """
    Train one network by minibatch descent (Adam by default, plain GD with
    optimizer="sgd")
    
    With a target-MSE stop rule, an epoch that ends below the target's
    3-significant-digit window is replayed from its start and training stops
    inside the first step that crosses the window, at the point of that step
    whose train MSE rounds to the target.
    
    Args:
        config: Hyperparameters and seeds
        dataset: Dataset (its train split is used) or a training SampleSet
        stop: Stopping rule, capped by config.max_epochs (default: max_epochs)
        component: Output component to learn; None learns all of them
    
    Returns:
        (final parameters, per-epoch record)
    """
    block = dataset.train if isinstance(dataset, Dataset) else dataset
    block = block.component(component)
    if len(block) == 0:
        raise InputError("Cannot train on an empty training set")
    stop = stop or StopRule.fixed(config.max_epochs)
    
    sizes = config.layer_sizes(block.inputs.shape[1], block.targets.shape[1])
    params = init_params(sizes, config.init_seed, config.lrelu_eps)
    probe = sample_probe_set(block, config.probe_n, config.probe_seed) if config.alpha > 0 else None
    optimizer = make_optimizer(config)
    
    record = TrainRecord(alpha=config.alpha, component=component, initial_mse=mse(params, block))
    logger.info(
        f"Training alpha={config.alpha:g} component={component} sizes={sizes} optimizer={config.optimizer} "
        f"on {len(block)} pairs (initial MSE {record.initial_mse:.4g})"
    )
    
    def watch(before: MlpParams, after: MlpParams) -> Optional[MlpParams]:
        value = mse(after, block)
        if stop.matches(value):
            return after
        if stop.overshot(value):
            return settle_on_step(before, after, block, stop)
        return None
    
    start_mse = record.initial_mse
    for epoch in range(1, config.max_epochs + 1):
        start_params, start_optimizer = params, optimizer.snapshot()
        params = _run_epoch(params, optimizer, block, config, epoch, probe)
        train_mse = mse(params, block)
        if not math.isfinite(train_mse):
            raise DivergenceError("Non-finite train MSE", epoch=epoch)
        if stop.overshot(train_mse) and stop.above(start_mse):
            logger.debug(f"alpha={config.alpha:g} epoch {epoch}: passed the target, replaying step by step")
            optimizer = start_optimizer
            params = _run_epoch(start_params, optimizer, block, config, epoch, probe, watch)
            train_mse = mse(params, block)
        
        lip = estimate_lipschitz(params, probe).value if probe is not None else math.nan
        stats = EpochStats(
            epoch=epoch,
            lr=learning_rate(config, epoch),
            loss=train_mse + config.alpha * lip if probe is not None else train_mse,
            train_mse=train_mse,
            train_rel_mse_pct=_relative_or_nan(params, block),
            lip_estimate=lip,
        )
        record.epochs.append(stats)
        start_mse = train_mse
        logger.debug(
            f"alpha={config.alpha:g} epoch {epoch}: lr={stats.lr:g} loss={stats.loss:.6g} "
            f"mse={train_mse:.6g} lip={lip:.4g}"
        )
        
        if stop.is_met(epoch, train_mse):
            break
    else:
        record.flagged = True
    
    record.params = params
    logger.info(
        f"Finished alpha={config.alpha:g} component={component} after {len(record.epochs)} epochs: "
        f"train MSE {record.final.train_mse:.4g}{' (flagged)' if record.flagged else ''}"
    )
    return params, record


def with_alpha(config: TrainConfig, alpha: float) -> TrainConfig:
    return replace(config, alpha=alpha)
