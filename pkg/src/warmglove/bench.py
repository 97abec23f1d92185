"""Seconds-per-iteration benchmark: vectorized vs per-pair-loop training.

For each vocabulary size, several count matrices are simulated at a fixed
density and both implementations run full-batch training steps on them.
Only the training step (gradient evaluation + AdaGrad update) is timed;
matrix simulation and the X-derived precomputations are setup and stay
outside the clock, and one warm-up iteration per corpus is discarded so
first-touch allocation effects cannot contaminate the numbers.

A hidden "noop" arm whose timed step does nothing is available to tests:
its near-zero times demonstrate that the timed region really excludes
setup. Arms run strictly sequentially in one process; whatever internal
parallelism the vectorized arm's BLAS uses is part of what is measured,
so the thread count belongs in the reported metadata.
"""

from __future__ import annotations

import platform
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import psutil

from .analysis import SimulationSpec, simulate_count_matrix
from .objective import HyperParams, LoopObjective, VectorizedObjective
from .trainer import AdagradState, adagrad_step, init_params

DEFAULT_ARMS = ("vectorized", "loop")

# fraction of currently-available RAM a single size is allowed to claim
_MEMORY_HEADROOM = 0.9


class MemoryBudgetError(MemoryError):
    """A requested vocabulary size will not fit in available memory."""

    def __init__(self, vocab_size: int, needed: int, available: int):
        self.vocab_size = vocab_size
        super().__init__(
            f"vocab size {vocab_size} needs about {needed / 2**30:.1f} GiB "
            f"({available / 2**30:.1f} GiB available)")


@dataclass(frozen=True)
class BenchSpec:
    vocab_sizes: tuple[int, ...] = (5000, 10000, 20000)
    density: float = 0.10
    iterations_per_corpus: int = 10
    corpora: int = 5
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.vocab_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"vocab_sizes must be >= 1, got {sizes}")
        if not 0.0 < self.density <= 1.0:
            raise ValueError(f"density must be in (0, 1], got {self.density}")
        if self.iterations_per_corpus < 1:
            raise ValueError("iterations_per_corpus must be >= 1")
        if self.corpora < 1:
            raise ValueError("corpora must be >= 1")
        object.__setattr__(self, "vocab_sizes", sizes)


@dataclass
class BenchResult:
    implementation: str
    vocab_size: int
    mean_s: float
    stddev_s: float


def estimate_peak_bytes(vocab_size: int, density: float) -> int:
    """Rough peak working set for one benchmark size, either arm.

    The vectorized arm holds four dense n x n float64 blocks (f(X), g(X),
    residual, scaled residual); the loop arm holds per-cell Python objects
    at ~150 bytes per non-zero. Both coexist with the sparse matrix.
    """
    n = float(vocab_size)
    nnz = density * n * n
    coo = 16.0 * nnz
    vectorized = 32.0 * n * n + coo
    loop = 152.0 * nnz + coo
    return int(max(vectorized, loop))


def _fits_in_memory(vocab_size: int, density: float) -> tuple[bool, int, int]:
    needed = estimate_peak_bytes(vocab_size, density)
    available = psutil.virtual_memory().available
    return needed <= _MEMORY_HEADROOM * available, needed, available


def sizes_that_fit(sizes: Sequence[int], density: float) -> list[int]:
    """Filter benchmark sizes to those the memory guard would admit."""
    return [s for s in sizes if _fits_in_memory(s, density)[0]]


def _run_timed_arm(arm: str, xm, hp: HyperParams, iterations: int) -> list[float]:
    if arm == "vectorized":
        engine = VectorizedObjective(xm, hp)
    elif arm == "loop":
        engine = LoopObjective(xm, hp)
    elif arm == "noop":
        engine = None
    else:
        raise ValueError(f"unknown benchmark arm {arm!r}")
    params = init_params(xm.dim, hp)
    state = AdagradState.for_params(params)
    lr = hp.learning_rate

    def step():
        if engine is None:
            return
        _, grads = engine.cost_and_gradients(params)
        adagrad_step(params, state, grads, lr)

    step()  # warm-up, excluded from statistics
    samples = []
    for _ in range(iterations):
        t0 = time.perf_counter()
        step()
        samples.append(time.perf_counter() - t0)
    return samples


def run_bench(spec: BenchSpec, hp: HyperParams | None = None,
              arms: Sequence[str] = DEFAULT_ARMS,
              progress: Callable[[str, int, int], None] | None = None) -> list[BenchResult]:
    """Time every (arm, vocab size) pair; one row per pair.

    Each size is vetted against available memory first and raises
    MemoryBudgetError naming the size if it cannot fit. Matrices are
    simulated deterministically from ``spec.seed``.
    """
    if hp is None:
        hp = HyperParams(mu=0.0)
    for size in spec.vocab_sizes:
        ok, needed, available = _fits_in_memory(size, spec.density)
        if not ok:
            raise MemoryBudgetError(size, needed, available)

    root = np.random.SeedSequence(spec.seed)
    size_seeds = root.spawn(len(spec.vocab_sizes))
    samples: dict[tuple[str, int], list[float]] = {
        (arm, size): [] for arm in arms for size in spec.vocab_sizes}
    for size_ix, size in enumerate(spec.vocab_sizes):
        children = size_seeds[size_ix].spawn(spec.corpora)
        for corpus_ix in range(spec.corpora):
            sim = SimulationSpec(
                vocab_size=size, density=spec.density,
                seed=int(children[corpus_ix].generate_state(1)[0]))
            xm = simulate_count_matrix(sim)
            for arm in arms:
                if progress is not None:
                    progress(arm, size, corpus_ix)
                samples[(arm, size)].extend(
                    _run_timed_arm(arm, xm, hp, spec.iterations_per_corpus))
            del xm

    results = []
    for arm in arms:
        for size in spec.vocab_sizes:
            times = samples[(arm, size)]
            results.append(BenchResult(
                implementation=arm,
                vocab_size=size,
                mean_s=float(np.mean(times)),
                stddev_s=float(np.std(times, ddof=1)) if len(times) > 1 else 0.0,
            ))
    return results


def hardware_metadata(threads: str | int | None = None) -> dict[str, str]:
    """CPU model, core counts and BLAS thread cap, for the CSV header."""
    cpu = platform.processor() or platform.machine()
    try:
        with open("/proc/cpuinfo") as f:
            for line in f:
                if line.lower().startswith("model name"):
                    cpu = line.split(":", 1)[1].strip()
                    break
    except OSError:
        pass
    return {
        "cpu": cpu,
        "logical_cores": str(psutil.cpu_count(logical=True)),
        "physical_cores": str(psutil.cpu_count(logical=False)),
        "blas_threads": str(threads) if threads is not None else "default",
    }


def emit_bench_table(results: Sequence[BenchResult], path,
                     metadata: dict[str, str] | None = None) -> str:
    """Write the CSV and return an aligned text table (rows = arms,
    columns = vocabulary sizes, cells = mean seconds/iteration)."""
    if not results:
        raise ValueError("no benchmark results to emit")
    with open(path, "w", encoding="utf-8") as f:
        if metadata:
            for key, value in metadata.items():
                f.write(f"# {key}: {value}\n")
        f.write("implementation,vocab_size,mean_s,stddev_s\n")
        for r in results:
            f.write(f"{r.implementation},{r.vocab_size},{r.mean_s!r},{r.stddev_s!r}\n")

    arms = list(dict.fromkeys(r.implementation for r in results))
    sizes = sorted({r.vocab_size for r in results})
    cell = {(r.implementation, r.vocab_size): r.mean_s for r in results}
    name_w = max(len("Implementation"), max(len(a) for a in arms))
    col_w = max(10, max(len(str(s)) for s in sizes) + 2)
    lines = ["Seconds per iteration (mean)"]
    lines.append("Implementation".ljust(name_w)
                 + "".join(str(s).rjust(col_w) for s in sizes))
    for arm in arms:
        row = arm.ljust(name_w)
        for size in sizes:
            val = cell.get((arm, size))
            row += ("-" if val is None else f"{val:.2f}").rjust(col_w)
        lines.append(row)
    return "\n".join(lines)
