"""Simulation study: how faithful is the retrofitted model to the plain one?

The study trains on simulated count matrices across a grid of penalty
weights mu and records, per (trial, mu) cell:

  * the Pearson correlation between model scores and log counts over the
    non-zero cells (how well the factorization still explains the data);
  * the mean distance from composed embeddings to their priors, for words
    that have priors (how strongly the anchor held);
  * the mean distance from composed embeddings to their own initial
    values, for words without priors (a drift baseline).

mu = 0 rows are the plain-model baseline. Priors for a trial are drawn
with the per-coordinate spread of that trial's mu = 0 embeddings, so the
penalty operates at a realistic scale without real pretrained vectors.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cooccur import CooccurrenceMatrix
from .objective import HyperParams, ModelParams, PriorEmbeddings
from .trainer import compose_embeddings, init_params, train

# rows per RNG block during matrix simulation; fixed because changing it
# would change the sampled matrix for a given seed
_SIM_BLOCK_ROWS = 1024

CORRELATION_MODES = ("model-score", "composed-dot")


@dataclass(frozen=True)
class SimulationSpec:
    """Shape of one simulated faithfulness study."""

    vocab_size: int = 500
    density: float = 0.10
    prior_fraction: float = 0.5
    mu_grid: tuple[float, ...] = (0.0, 0.001, 0.01, 0.1, 1.0, 10.0)
    trials: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.density <= 1.0:
            raise ValueError(f"density must be in (0, 1], got {self.density}")
        if not 0.0 <= self.prior_fraction <= 1.0:
            raise ValueError(
                f"prior_fraction must be in [0, 1], got {self.prior_fraction}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.vocab_size < 2:
            raise ValueError(f"vocab_size must be >= 2, got {self.vocab_size}")
        grid = tuple(float(m) for m in self.mu_grid)
        if not grid:
            raise ValueError("mu_grid must be non-empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"mu_grid must be strictly ascending, got {grid}")
        if grid[0] < 0.0:
            raise ValueError("mu values must be >= 0")
        object.__setattr__(self, "mu_grid", grid)


@dataclass
class SweepRow:
    trial: int
    mu: float
    correlation: float
    dist_with_prior: float | None
    dist_without_prior: float | None


@dataclass
class SweepResult:
    spec: SimulationSpec
    rows: list[SweepRow]


@dataclass
class DistanceStats:
    mean_with_prior: float | None
    mean_without_prior: float | None


def simulate_count_matrix(spec: SimulationSpec) -> CooccurrenceMatrix:
    """Draw a symmetric count matrix at roughly the requested density.

    Upper-triangle cells (diagonal included) are kept with probability
    ``density`` and mirrored; kept cells get log-normal values exp(N(1, 1)),
    heavy-tailed enough that log-counts span several units. Deterministic
    for a fixed spec.
    """
    n = spec.vocab_size
    rng = np.random.default_rng(spec.seed)
    row_parts: list[np.ndarray] = []
    col_parts: list[np.ndarray] = []
    cols = np.arange(n)
    for r0 in range(0, n, _SIM_BLOCK_ROWS):
        r1 = min(r0 + _SIM_BLOCK_ROWS, n)
        block = rng.random((r1 - r0, n))
        mask = block < spec.density
        mask &= cols[None, :] >= np.arange(r0, r1)[:, None]
        rr, cc = np.nonzero(mask)
        row_parts.append(rr.astype(np.int32) + np.int32(r0))
        col_parts.append(cc.astype(np.int32))
    rows = np.concatenate(row_parts)
    vals = np.exp(rng.normal(1.0, 1.0, len(rows)))
    return CooccurrenceMatrix.from_upper(n, rows, np.concatenate(col_parts), vals)


def correlation_score_vs_logcount(params: ModelParams, x: CooccurrenceMatrix,
                                  mode: str = "model-score") -> float:
    """Pearson correlation of pairwise scores with log counts over non-zero
    cells.

    ``model-score`` uses w_i . w~_j + b_i + b~_j, the quantity the
    objective actually regresses onto log counts; ``composed-dot`` uses
    (w_i + w~_i) . (w_j + w~_j), the score available after training when
    only composed vectors are kept.
    """
    if mode not in CORRELATION_MODES:
        raise ValueError(f"mode must be one of {CORRELATION_MODES}, got {mode!r}")
    if x.nnz < 2:
        raise ValueError("need at least 2 non-zero cells")
    rows, cols = x.rows, x.cols
    if mode == "model-score":
        scores = (np.einsum("ij,ij->i", params.W[rows], params.W_tilde[cols])
                  + params.b[rows] + params.b_tilde[cols])
    else:
        composed = compose_embeddings(params)
        scores = np.einsum("ij,ij->i", composed[rows], composed[cols])
    logx = np.log(x.vals)
    if np.ptp(logx) == 0.0 or np.ptp(scores) == 0.0:
        raise ValueError("zero variance: correlation undefined")
    return float(np.corrcoef(scores, logx)[0, 1])


def distance_to_priors(params: ModelParams, priors: PriorEmbeddings | None,
                       initial_params: ModelParams | None = None) -> DistanceStats:
    """Mean embedding movement, split by prior availability.

    Words with priors are measured against their prior vectors; words
    without are measured against their own initial composed vectors, which
    requires the initial-parameter snapshot. Arms that cannot be computed
    are reported as None, never as zero.
    """
    composed = compose_embeddings(params)
    n = composed.shape[0]
    anchored = np.zeros(n, dtype=bool)
    with_prior = None
    if priors is not None and len(priors) > 0:
        anchored[priors.indices] = True
        gaps = composed[priors.indices] - priors.vectors
        with_prior = float(np.mean(np.linalg.norm(gaps, axis=1)))
    without_prior = None
    if initial_params is not None and not anchored.all():
        drift = composed[~anchored] - compose_embeddings(initial_params)[~anchored]
        without_prior = float(np.mean(np.linalg.norm(drift, axis=1)))
    return DistanceStats(mean_with_prior=with_prior,
                         mean_without_prior=without_prior)


def run_mu_sweep(spec: SimulationSpec, hp: HyperParams,
                 mode: str = "model-score",
                 progress: Callable[[int, float], None] | None = None) -> SweepResult:
    """Train across the mu grid on fresh simulated data for each trial.

    All randomness derives from ``spec.seed`` (``hp.seed`` is overridden
    per trial), so a fixed spec reproduces the sweep exactly. Rows come
    back trial-major, mu-minor.
    """
    root = np.random.SeedSequence(spec.seed)
    rows: list[SweepRow] = []
    for trial, child in enumerate(root.spawn(spec.trials)):
        mat_ss, prior_ss, train_ss = child.spawn(3)
        trial_spec = dataclasses.replace(spec, seed=int(mat_ss.generate_state(1)[0]))
        xm = simulate_count_matrix(trial_spec)
        train_seed = int(train_ss.generate_state(1)[0])

        # plain-model baseline; also sets the scale for simulated priors
        hp0 = dataclasses.replace(hp, mu=0.0, seed=train_seed)
        if progress is not None:
            progress(trial, 0.0)
        base = train(xm, hp0)
        base_spread = compose_embeddings(base.params).std(axis=0)

        prng = np.random.default_rng(prior_ss.generate_state(1)[0])
        n_anchor = int(round(spec.prior_fraction * spec.vocab_size))
        idx = np.sort(prng.choice(spec.vocab_size, size=n_anchor, replace=False))
        priors = PriorEmbeddings(
            indices=idx.astype(np.int64),
            vectors=prng.normal(0.0, base_spread, size=(n_anchor, hp.dim)))

        for mu in spec.mu_grid:
            if mu == 0.0:
                result, hp_mu = base, hp0
            else:
                if progress is not None:
                    progress(trial, mu)
                hp_mu = dataclasses.replace(hp, mu=mu, seed=train_seed)
                result = train(xm, hp_mu, priors)
            start = init_params(xm.dim, hp_mu, priors)
            dist = distance_to_priors(result.params, priors, initial_params=start)
            rows.append(SweepRow(
                trial=trial,
                mu=mu,
                correlation=correlation_score_vs_logcount(result.params, xm, mode),
                dist_with_prior=dist.mean_with_prior,
                dist_without_prior=dist.mean_without_prior,
            ))
    return SweepResult(spec=spec, rows=rows)


def write_sweep_csv(result: SweepResult, path) -> None:
    """CSV with columns trial,mu,correlation,dist_with_prior,dist_without_prior."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["trial", "mu", "correlation", "dist_with_prior", "dist_without_prior"])
        for r in result.rows:
            writer.writerow([
                r.trial,
                repr(r.mu),
                repr(r.correlation),
                "nan" if r.dist_with_prior is None else repr(r.dist_with_prior),
                "nan" if r.dist_without_prior is None else repr(r.dist_without_prior),
            ])
