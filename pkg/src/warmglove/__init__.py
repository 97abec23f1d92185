"""GloVe-style embeddings with a warm start.

Full-batch vectorized training of the weighted log-bilinear objective,
optional retrofitting toward prior vectors, co-occurrence construction,
a simulation-based faithfulness study, and a speed benchmark comparing
the vectorized path against the per-pair reference loop.

Heavy submodules load lazily so the CLI can cap BLAS threads before
numpy is imported.
"""

__version__ = "0.1.0"

_LAZY = {
    "TokenizerConfig": "corpus",
    "Vocabulary": "corpus",
    "tokenize": "corpus",
    "build_vocabulary": "corpus",
    "CooccurrenceMatrix": "cooccur",
    "build_cooccurrence": "cooccur",
    "matrix_stats": "cooccur",
    "HyperParams": "objective",
    "ModelParams": "objective",
    "PriorEmbeddings": "objective",
    "Gradients": "objective",
    "weight_f": "objective",
    "g_fill": "objective",
    "cost_vectorized": "objective",
    "gradients_vectorized": "objective",
    "cost_reference_loop": "objective",
    "gradients_reference_loop": "objective",
    "AdagradState": "trainer",
    "TrainReport": "trainer",
    "DivergenceError": "trainer",
    "init_params": "trainer",
    "adagrad_step": "trainer",
    "train": "trainer",
    "compose_embeddings": "trainer",
    "EmbeddingFile": "embedding_io",
    "read_embeddings": "embedding_io",
    "write_embeddings": "embedding_io",
    "resolve_priors": "embedding_io",
    "SimulationSpec": "analysis",
    "simulate_count_matrix": "analysis",
    "correlation_score_vs_logcount": "analysis",
    "distance_to_priors": "analysis",
    "run_mu_sweep": "analysis",
    "BenchSpec": "bench",
    "run_bench": "bench",
    "emit_bench_table": "bench",
    "sum_features": "featurize",
    "DocumentVector": "featurize",
}

__all__ = sorted(_LAZY) + ["__version__"]


def __getattr__(name):
    if name in _LAZY:
        from importlib import import_module
        module = import_module(f".{_LAZY[name]}", __name__)
        value = getattr(module, name)
        globals()[name] = value
        return value
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
