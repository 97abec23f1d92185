"""Weighted log-bilinear embedding objective, with and without a prior anchor.

The model scores a word/context pair as w_i . w~_j + b_i + b~_j and is fit
so the score approximates log X_ij over the non-zero cells of a
co-occurrence matrix X, each cell weighted by

    f(x) = min(1, (x / x_max)^alpha),    f(0) = 0.

Because f(0) = 0, replacing log 0 by an arbitrary finite constant k (the
"g fill") leaves the objective untouched, which is what makes the dense,
fully vectorized formulation possible:

    cost = sum_ij f(X_ij) * (W W~^T + b 1^T + 1 b~^T - g(X))_ij^2

With prior vectors r_i available for an anchor set R, a retrofitting
penalty is added, pulling the composed embedding w_i + w~_i toward r_i:

    cost += mu * sum_{i in R} || (w_i + w~_i) - r_i ||^2

Gradients are exact: with E = 2 f(X) .* M (M the residual matrix),
dW = E W~, dW~ = E^T W, db_i = sum_j E_ij, db~_j = sum_i E_ij, plus
2 mu ((w_i + w~_i) - r_i) on both the W and W~ rows of the anchor set.

Two interchangeable engines are provided. ``VectorizedObjective`` does the
dense matrix computation above. ``LoopObjective`` is the pre-vectorization
formulation -- an explicit Python loop over non-zero cells only -- kept
both as an independent oracle for the vectorized path and as the
"non-vectorized" arm of the speed benchmark. The two agree to ~1e-13
block-relative error; keep them independent (do not refactor one in terms
of the other).

Everything here is a pure function of its inputs; all arithmetic is
float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .cooccur import CooccurrenceMatrix


class ShapeMismatchError(ValueError):
    """Parameter/matrix/prior shapes do not agree."""


@dataclass(frozen=True)
class HyperParams:
    """Training hyperparameters. Defaults are the standard ones for this
    model family (alpha 0.75, x_max 100, learning rate 0.05, mu 0.1,
    50-dimensional vectors, 50K full-batch epochs)."""

    dim: int = 50
    alpha: float = 0.75
    x_max: float = 100.0
    learning_rate: float = 0.05
    mu: float = 0.1
    epochs: int = 50000
    g_fill: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.x_max <= 0.0:
            raise ValueError(f"x_max must be > 0, got {self.x_max}")
        if self.learning_rate <= 0.0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.mu < 0.0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if not np.isfinite(self.g_fill):
            raise ValueError("g_fill must be finite")


def _as_f64(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64))


@dataclass
class ModelParams:
    """Word vectors W, context vectors W_tilde (one row per word), and the
    two per-word bias vectors."""

    W: np.ndarray
    W_tilde: np.ndarray
    b: np.ndarray
    b_tilde: np.ndarray

    def __post_init__(self):
        self.W = _as_f64(self.W)
        self.W_tilde = _as_f64(self.W_tilde)
        self.b = _as_f64(self.b)
        self.b_tilde = _as_f64(self.b_tilde)

    @property
    def vocab_size(self) -> int:
        return self.W.shape[0]

    @property
    def dim(self) -> int:
        return self.W.shape[1]

    def copy(self) -> "ModelParams":
        return ModelParams(self.W.copy(), self.W_tilde.copy(),
                           self.b.copy(), self.b_tilde.copy())

    def validate(self) -> None:
        n, d = self.W.shape
        if self.W_tilde.shape != (n, d):
            raise ShapeMismatchError(
                f"W_tilde shape {self.W_tilde.shape} != W shape {(n, d)}")
        if self.b.shape != (n,) or self.b_tilde.shape != (n,):
            raise ShapeMismatchError(
                f"bias shapes {self.b.shape}, {self.b_tilde.shape} != ({n},)")
        for name, block in (("W", self.W), ("W_tilde", self.W_tilde),
                            ("b", self.b), ("b_tilde", self.b_tilde)):
            if not np.all(np.isfinite(block)):
                raise ValueError(f"non-finite entries in {name}")


@dataclass
class Gradients:
    """Gradient blocks matching ModelParams."""

    dW: np.ndarray
    dW_tilde: np.ndarray
    db: np.ndarray
    db_tilde: np.ndarray

    def blocks(self):
        return (("dW", self.dW), ("dW_tilde", self.dW_tilde),
                ("db", self.db), ("db_tilde", self.db_tilde))


@dataclass
class PriorEmbeddings:
    """Prior vectors resolved against one vocabulary.

    ``indices`` are the anchor word ids (sorted, unique); ``vectors[t]``
    is the prior for word ``indices[t]``. An empty anchor set is legal and
    makes the penalty vanish.
    """

    indices: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.vectors = _as_f64(self.vectors)
        if self.vectors.ndim != 2 or self.indices.ndim != 1:
            raise ShapeMismatchError("indices must be 1-D and vectors 2-D")
        if len(self.indices) != len(self.vectors):
            raise ShapeMismatchError(
                f"{len(self.indices)} indices vs {len(self.vectors)} vectors")
        if len(self.indices):
            if np.any(self.indices < 0):
                raise ValueError("negative anchor index")
            if np.any(np.diff(self.indices) <= 0):
                order = np.argsort(self.indices)
                self.indices = self.indices[order]
                self.vectors = self.vectors[order]
                if np.any(np.diff(self.indices) == 0):
                    raise ValueError("duplicate anchor index")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


MatrixLike = Union[CooccurrenceMatrix, np.ndarray]


def weight_f(x, alpha: float = 0.75, x_max: float = 100.0):
    """Weighting f(x) = min(1, (x/x_max)^alpha); f(0) = 0 exactly.

    Accepts a scalar or an array; rejects negative counts.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("co-occurrence counts must be >= 0")
    out = np.minimum(1.0, (arr / x_max) ** alpha)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def g_fill(x, k: float):
    """log x for x > 0, the constant k at x = 0 (elementwise).

    The fill value is provably irrelevant to cost and gradients because
    the f-weight of a zero cell is zero; k only shapes the dense residual
    matrix. Inputs must be >= 0.
    """
    arr = np.asarray(x, dtype=np.float64)
    out = np.full(arr.shape, float(k))
    pos = arr > 0
    out[pos] = np.log(arr[pos])
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def _dense_counts(x: MatrixLike) -> np.ndarray:
    if isinstance(x, CooccurrenceMatrix):
        return x.to_dense()
    dense = np.asarray(x, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ShapeMismatchError(f"count matrix must be square, got {dense.shape}")
    return dense


def _check_shapes(params: ModelParams, n: int, priors: PriorEmbeddings | None) -> None:
    params.validate()
    if params.vocab_size != n:
        raise ShapeMismatchError(
            f"params cover {params.vocab_size} words, matrix has {n}")
    if priors is not None and len(priors):
        if priors.dim != params.dim:
            raise ShapeMismatchError(
                f"prior dim {priors.dim} != embedding dim {params.dim}")
        if priors.indices[-1] >= n:
            raise ShapeMismatchError(
                f"anchor index {priors.indices[-1]} outside vocabulary of {n}")


class VectorizedObjective:
    """Dense full-batch engine.

    The X-derived arrays f(X) and g(X) are computed once at construction;
    they are constant across training epochs, so cost/gradient calls touch
    only the parameter-dependent part.
    """

    def __init__(self, x: MatrixLike, hp: HyperParams,
                 priors: PriorEmbeddings | None = None):
        dense = _dense_counts(x)
        self.n = dense.shape[0]
        self.hp = hp
        self.fx = weight_f(dense, hp.alpha, hp.x_max)
        self.gx = g_fill(dense, hp.g_fill)
        self.priors = priors if (priors is not None and len(priors) > 0
                                 and hp.mu > 0.0) else None

    def _residual(self, p: ModelParams) -> np.ndarray:
        m = p.W @ p.W_tilde.T
        m += p.b[:, None]
        m += p.b_tilde[None, :]
        m -= self.gx
        return m

    def _penalty_gap(self, p: ModelParams) -> np.ndarray:
        pri = self.priors
        return p.W[pri.indices] + p.W_tilde[pri.indices] - pri.vectors

    def cost(self, p: ModelParams) -> float:
        _check_shapes(p, self.n, self.priors)
        m = self._residual(p)
        c = float(np.vdot(self.fx * m, m))
        if self.priors is not None:
            gap = self._penalty_gap(p)
            c += self.hp.mu * float(np.vdot(gap, gap))
        return c

    def cost_and_gradients(self, p: ModelParams) -> tuple[float, Gradients]:
        _check_shapes(p, self.n, self.priors)
        m = self._residual(p)
        t = self.fx * m
        cost = float(np.vdot(t, m))
        t *= 2.0  # t is now E = 2 f(X) .* M
        grads = Gradients(
            dW=t @ p.W_tilde,
            dW_tilde=t.T @ p.W,
            db=t.sum(axis=1),
            db_tilde=t.sum(axis=0),
        )
        if self.priors is not None:
            gap = self._penalty_gap(p)
            cost += self.hp.mu * float(np.vdot(gap, gap))
            pen = (2.0 * self.hp.mu) * gap
            # anchor indices are unique, so fancy-indexed += is exact
            grads.dW[self.priors.indices] += pen
            grads.dW_tilde[self.priors.indices] += pen
        return cost, grads

    def gradients(self, p: ModelParams) -> Gradients:
        return self.cost_and_gradients(p)[1]


class LoopObjective:
    """Per-pair engine: explicit iteration over the non-zero cells.

    This is the formulation vectorization replaced. It exists as an
    independent correctness oracle and as the benchmark's slow arm, so it
    deliberately stays a Python-level loop; only single-row numpy
    operations are allowed inside it.
    """

    def __init__(self, x: MatrixLike, hp: HyperParams,
                 priors: PriorEmbeddings | None = None):
        if isinstance(x, CooccurrenceMatrix):
            self.n = x.dim
            rows, cols, vals = x.rows, x.cols, x.vals
        else:
            dense = _dense_counts(x)
            self.n = dense.shape[0]
            rows, cols = np.nonzero(dense)
            vals = dense[rows, cols]
        vals = np.asarray(vals, dtype=np.float64)
        if np.any(vals < 0):
            raise ValueError("co-occurrence counts must be >= 0")
        self.hp = hp
        # Per-cell constants (setup, shared with the vectorized arm's
        # f(X)/g(X) precomputation), stored as plain Python objects so the
        # loop itself does not pay numpy scalar-boxing costs.
        self._i = np.asarray(rows).tolist()
        self._j = np.asarray(cols).tolist()
        self._f = weight_f(vals, hp.alpha, hp.x_max).tolist()
        self._logx = np.log(vals).tolist()
        self.priors = priors if (priors is not None and len(priors) > 0
                                 and hp.mu > 0.0) else None

    def cost(self, p: ModelParams) -> float:
        _check_shapes(p, self.n, self.priors)
        W, Wt = p.W, p.W_tilde
        bl, btl = p.b.tolist(), p.b_tilde.tolist()
        dot = np.dot
        c = 0.0
        for i, j, fx, lx in zip(self._i, self._j, self._f, self._logx):
            diff = float(dot(W[i], Wt[j])) + bl[i] + btl[j] - lx
            c += fx * diff * diff
        if self.priors is not None:
            mu = self.hp.mu
            for t, i in enumerate(self.priors.indices.tolist()):
                gap = W[i] + Wt[i] - self.priors.vectors[t]
                c += mu * float(np.dot(gap, gap))
        return c

    def cost_and_gradients(self, p: ModelParams) -> tuple[float, Gradients]:
        _check_shapes(p, self.n, self.priors)
        W, Wt = p.W, p.W_tilde
        bl, btl = p.b.tolist(), p.b_tilde.tolist()
        n = self.n
        dW = np.zeros_like(W)
        dWt = np.zeros_like(Wt)
        db = [0.0] * n
        dbt = [0.0] * n
        dot = np.dot
        c = 0.0
        for i, j, fx, lx in zip(self._i, self._j, self._f, self._logx):
            wi = W[i]
            wj = Wt[j]
            diff = float(dot(wi, wj)) + bl[i] + btl[j] - lx
            e = (fx + fx) * diff
            c += fx * diff * diff
            dW[i] += e * wj
            dWt[j] += e * wi
            db[i] += e
            dbt[j] += e
        grads = Gradients(dW=dW, dW_tilde=dWt,
                          db=np.asarray(db), db_tilde=np.asarray(dbt))
        if self.priors is not None:
            mu = self.hp.mu
            for t, i in enumerate(self.priors.indices.tolist()):
                gap = W[i] + Wt[i] - self.priors.vectors[t]
                c += mu * float(dot(gap, gap))
                pen = (mu + mu) * gap
                dW[i] += pen
                dWt[i] += pen
        return c, grads

    def gradients(self, p: ModelParams) -> Gradients:
        return self.cost_and_gradients(p)[1]


def cost_vectorized(params: ModelParams, x: MatrixLike, hp: HyperParams,
                    priors: PriorEmbeddings | None = None) -> float:
    """Full objective via the dense vectorized engine."""
    return VectorizedObjective(x, hp, priors).cost(params)


def gradients_vectorized(params: ModelParams, x: MatrixLike, hp: HyperParams,
                         priors: PriorEmbeddings | None = None) -> Gradients:
    """Exact analytic gradients via the dense vectorized engine."""
    return VectorizedObjective(x, hp, priors).gradients(params)


def cost_reference_loop(params: ModelParams, x: MatrixLike, hp: HyperParams,
                        priors: PriorEmbeddings | None = None) -> float:
    """Same objective, computed by the per-pair reference loop."""
    return LoopObjective(x, hp, priors).cost(params)


def gradients_reference_loop(params: ModelParams, x: MatrixLike, hp: HyperParams,
                             priors: PriorEmbeddings | None = None) -> Gradients:
    """Same gradients, computed by the per-pair reference loop."""
    return LoopObjective(x, hp, priors).gradients(params)
