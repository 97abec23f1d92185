"""Full-batch AdaGrad training loop and parameter initialization.

One epoch is one exact gradient of the whole objective followed by one
AdaGrad update; there is no mini-batching. Per-pair stochastic updates
exist only in the benchmark's reference arm, not here.

Initialization draws W and W_tilde i.i.d. uniform in (-0.5/dim, 0.5/dim)
and zeroes both bias vectors. When prior vectors participate in training
(mu > 0, or the explicit start-at-priors option), rows of words *without*
priors are rescaled so the composed vectors w + w~ start with the same
entrywise standard deviation as the priors. When priors cannot influence
the objective (mu = 0 and no start-at-priors), they are ignored entirely,
so such a run is bit-identical to one with no priors at all.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .objective import (
    HyperParams,
    ModelParams,
    Gradients,
    PriorEmbeddings,
    ShapeMismatchError,
    VectorizedObjective,
)
from .cooccur import CooccurrenceMatrix

INITIAL_ACCUMULATOR = 1.0


class DivergenceError(RuntimeError):
    """Training produced a non-finite cost (learning rate too hot, usually)."""


@dataclass
class AdagradState:
    """Running sums of squared gradients, one accumulator per parameter."""

    acc_W: np.ndarray
    acc_W_tilde: np.ndarray
    acc_b: np.ndarray
    acc_b_tilde: np.ndarray

    @classmethod
    def for_params(cls, params: ModelParams,
                   initial: float = INITIAL_ACCUMULATOR) -> "AdagradState":
        return cls(
            acc_W=np.full_like(params.W, initial),
            acc_W_tilde=np.full_like(params.W_tilde, initial),
            acc_b=np.full_like(params.b, initial),
            acc_b_tilde=np.full_like(params.b_tilde, initial),
        )


@dataclass
class TrainReport:
    """Cost and wall-clock seconds for every epoch actually run."""

    costs: list[float]
    seconds: list[float]
    epochs_run: int


@dataclass
class TrainResult:
    params: ModelParams
    report: TrainReport


def _priors_active(hp: HyperParams, priors: PriorEmbeddings | None,
                   init_at_priors: bool) -> bool:
    return (priors is not None and len(priors) > 0
            and (hp.mu > 0.0 or init_at_priors))


def init_params(vocab_size: int, hp: HyperParams,
                priors: PriorEmbeddings | None = None,
                init_at_priors: bool = False) -> ModelParams:
    """Deterministic random initialization for a fixed seed.

    The base uniform draws are consumed identically whether or not priors
    are supplied, so prior handling never shifts the random stream.
    """
    if vocab_size < 1:
        raise ValueError(f"vocab_size must be >= 1, got {vocab_size}")
    rng = np.random.default_rng(hp.seed)
    half = 0.5 / hp.dim
    w = rng.uniform(-half, half, (vocab_size, hp.dim))
    wt = rng.uniform(-half, half, (vocab_size, hp.dim))
    if _priors_active(hp, priors, init_at_priors):
        if priors.dim != hp.dim:
            raise ShapeMismatchError(
                f"prior dim {priors.dim} != configured dim {hp.dim}")
        if priors.indices[-1] >= vocab_size:
            raise ShapeMismatchError(
                f"anchor index {priors.indices[-1]} outside vocabulary of {vocab_size}")
        spread = float(np.std(priors.vectors))
        if spread > 0.0:
            # uniform(-a, a) has stddev a/sqrt(3); w + w~ then has a*sqrt(2/3).
            # Scale the no-prior rows so their composed vectors start at the
            # priors' entrywise stddev.
            scale = spread * np.sqrt(1.5) / half
            no_prior = np.ones(vocab_size, dtype=bool)
            no_prior[priors.indices] = False
            w[no_prior] *= scale
            wt[no_prior] *= scale
        if init_at_priors:
            w[priors.indices] = priors.vectors / 2.0
            wt[priors.indices] = priors.vectors / 2.0
    return ModelParams(W=w, W_tilde=wt,
                       b=np.zeros(vocab_size), b_tilde=np.zeros(vocab_size))


def adagrad_step(params: ModelParams, state: AdagradState, grads: Gradients,
                 learning_rate: float) -> tuple[ModelParams, AdagradState]:
    """One elementwise update: a += g^2 first, then theta -= lr * g / sqrt(a).

    Mutates ``params`` and ``state`` in place and returns them.
    """
    for theta, acc, g in (
        (params.W, state.acc_W, grads.dW),
        (params.W_tilde, state.acc_W_tilde, grads.dW_tilde),
        (params.b, state.acc_b, grads.db),
        (params.b_tilde, state.acc_b_tilde, grads.db_tilde),
    ):
        acc += g * g
        theta -= learning_rate * g / np.sqrt(acc)
    return params, state


def train(x: CooccurrenceMatrix | np.ndarray, hp: HyperParams,
          priors: PriorEmbeddings | None = None,
          init_at_priors: bool = False,
          on_epoch: Callable[[int, float, float], None] | None = None) -> TrainResult:
    """Run ``hp.epochs`` full-batch epochs from a fresh initialization.

    ``on_epoch(epoch, cost, seconds)`` is invoked after every update.
    Raises DivergenceError as soon as the cost stops being finite.
    """
    # the engine applies the penalty only when mu > 0 and the anchor set is
    # non-empty; init_params applies the matching initialization rule
    engine = VectorizedObjective(x, hp, priors)
    params = init_params(engine.n, hp, priors, init_at_priors)
    state = AdagradState.for_params(params)
    costs: list[float] = []
    seconds: list[float] = []
    for epoch in range(hp.epochs):
        start = time.perf_counter()
        cost, grads = engine.cost_and_gradients(params)
        if not np.isfinite(cost):
            raise DivergenceError(
                f"non-finite cost at epoch {epoch}; lower the learning rate")
        adagrad_step(params, state, grads, hp.learning_rate)
        elapsed = time.perf_counter() - start
        costs.append(cost)
        seconds.append(elapsed)
        if on_epoch is not None:
            on_epoch(epoch, cost, elapsed)
    if hp.epochs > 0 and not all(
            np.all(np.isfinite(block)) for block in
            (params.W, params.W_tilde, params.b, params.b_tilde)):
        raise DivergenceError("non-finite parameters after final update")
    return TrainResult(params=params,
                       report=TrainReport(costs=costs, seconds=seconds,
                                          epochs_run=len(costs)))


def compose_embeddings(params: ModelParams) -> np.ndarray:
    """Final per-word embeddings: row i is w_i + w~_i."""
    return params.W + params.W_tilde
