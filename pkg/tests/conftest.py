"""Shared helpers: random problem instances and comparison metrics."""

import numpy as np
import pytest

from warmglove.objective import ModelParams, PriorEmbeddings


def rel_err(a, b) -> float:
    """Block-relative error: max |a - b| over the max magnitude of b.

    Element-wise relative error is meaningless where cancellation drives
    individual entries toward zero, so disagreement is measured against
    the block's own scale.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    scale = max(float(np.max(np.abs(b))) if b.size else 0.0, 1e-300)
    return float(np.max(np.abs(a - b))) / scale if a.size else 0.0


def random_counts(rng: np.random.Generator, n: int, density: float) -> np.ndarray:
    """Dense symmetric non-negative count matrix with log-normal values."""
    upper = np.triu(rng.random((n, n)) < density)
    dense = np.zeros((n, n))
    dense[upper] = np.exp(rng.normal(1.0, 1.0, int(upper.sum())))
    return np.maximum(dense, dense.T)


def random_params(rng: np.random.Generator, n: int, d: int,
                  scale: float = 0.3) -> ModelParams:
    return ModelParams(
        W=rng.normal(0.0, scale, (n, d)),
        W_tilde=rng.normal(0.0, scale, (n, d)),
        b=rng.normal(0.0, scale, n),
        b_tilde=rng.normal(0.0, scale, n),
    )


def random_priors(rng: np.random.Generator, n: int, d: int, count: int,
                  scale: float = 0.3) -> PriorEmbeddings:
    idx = np.sort(rng.choice(n, size=count, replace=False))
    return PriorEmbeddings(indices=idx.astype(np.int64),
                           vectors=rng.normal(0.0, scale, (count, d)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
