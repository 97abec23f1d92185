"""Command-line front end: cooccur, train, simulate, bench, featurize.

Exit statuses: 0 success, 1 usage error (one-line diagnostic on stderr),
2 runtime error (I/O, divergence, memory). Every flag has a documented
default; defaults for the model hyperparameters are the standard ones
(dim 50, alpha 0.75, x_max 100, learning rate 0.05, mu 0.1, window 10).

Flags may also come from a ``--config`` file of ``key = value`` lines
(keys are flag names without the leading dashes); explicit flags win over
the config file, which wins over built-in defaults.

numpy is imported only after ``--threads`` is known, so the BLAS thread
cap can be applied through the environment.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable

PROG = "warmglove"

_REQUIRED = object()


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class _Opt:
    flag: str
    type: Callable[[str], Any]
    default: Any
    help: str
    metavar: str | None = None

    @property
    def dest(self) -> str:
        return self.flag.lstrip("-").replace("-", "_")


def _boolish(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(",") if p.strip() != "")


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(",") if p.strip() != "")


_COMMON = [
    _Opt("--config", str, None, "key = value file of flag overrides; flags win"),
    _Opt("--threads", int, None, "cap BLAS/OpenMP threads; all cores if unset"),
]

_HP_OPTS = [
    _Opt("--dim", int, 50, "embedding dimension"),
    _Opt("--alpha", float, 0.75, "weighting exponent"),
    _Opt("--x-max", float, 100.0, "weighting cutoff"),
    _Opt("--lr", float, 0.05, "AdaGrad learning rate"),
    _Opt("--seed", int, 0, "random seed"),
]

_OPTIONS: dict[str, list[_Opt]] = {
    "cooccur": _COMMON + [
        _Opt("--window", int, 10, "context window in words, each side"),
        _Opt("--min-count", int, 300, "keep tokens with at least this many occurrences"),
        _Opt("--out", str, _REQUIRED, "output co-occurrence matrix file"),
        _Opt("--vocab-out", str, None,
             "output vocabulary file (default: <out>.vocab)"),
    ],
    "train": _COMMON + _HP_OPTS + [
        _Opt("--cooc", str, _REQUIRED, "input co-occurrence matrix file"),
        _Opt("--vocab", str, None,
             "vocabulary file for token names (default: <cooc>.vocab if present)"),
        _Opt("--epochs", int, 50000, "full-batch training epochs"),
        _Opt("--mu", float, 0.1, "retrofitting penalty weight"),
        _Opt("--g-fill", float, 0.0, "fill constant for log of zero counts"),
        _Opt("--priors", str, None, "prior embeddings to retrofit toward"),
        _Opt("--init-at-priors", _boolish, False,
             "start anchored words at half their prior vector"),
        _Opt("--out", str, _REQUIRED, "output embedding text file"),
        _Opt("--report", str, None, "per-epoch CSV: epoch,cost,seconds"),
        _Opt("--quiet", _boolish, False, "suppress per-epoch cost lines on stderr"),
    ],
    "simulate": _COMMON + _HP_OPTS + [
        _Opt("--size", int, 500, "simulated vocabulary size"),
        _Opt("--density", float, 0.10, "target non-zero fraction"),
        _Opt("--prior-frac", float, 0.5, "fraction of words given simulated priors"),
        _Opt("--trials", int, 5, "independent trials"),
        _Opt("--mu-grid", _float_list, (0.0, 0.001, 0.01, 0.1, 1.0, 10.0),
             "comma-separated ascending mu values", metavar="MU,MU,..."),
        _Opt("--epochs", int, 2000,
             "training epochs per cell (50000 reproduces the full-scale setting)"),
        _Opt("--mode", str, "model-score",
             "correlation mode: model-score or composed-dot"),
        _Opt("--out", str, _REQUIRED, "output sweep CSV"),
        _Opt("--quiet", _boolish, False, "suppress progress lines on stderr"),
    ],
    "bench": _COMMON + [
        _Opt("--sizes", _int_list, (5000, 10000, 20000),
             "comma-separated vocabulary sizes", metavar="N,N,..."),
        _Opt("--density", float, 0.10, "target non-zero fraction"),
        _Opt("--iters", int, 10, "timed iterations per corpus"),
        _Opt("--corpora", int, 5, "simulated corpora per size"),
        _Opt("--dim", int, 50, "embedding dimension"),
        _Opt("--seed", int, 0, "random seed"),
        _Opt("--out", str, _REQUIRED, "output CSV"),
        _Opt("--quiet", _boolish, False, "suppress progress lines on stderr"),
    ],
    "featurize": _COMMON + [
        _Opt("--embeddings", str, _REQUIRED, "embedding text file"),
        _Opt("--in", str, _REQUIRED, "input documents, one per line"),
        _Opt("--out", str, _REQUIRED, "output CSV of document vectors"),
    ],
}

_SUMMARY = {
    "cooccur": "tokenize corpora and build the windowed co-occurrence matrix",
    "train": "train embeddings, optionally retrofitting toward priors",
    "simulate": "faithfulness sweep over simulated count matrices",
    "bench": "time vectorized vs per-pair-loop training steps",
    "featurize": "document vectors as sums of word vectors",
}


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for command, opts in _OPTIONS.items():
        p = sub.add_parser(command, help=_SUMMARY[command],
                           description=_SUMMARY[command])
        if command == "cooccur":
            p.add_argument("corpus", nargs="+", metavar="CORPUS",
                           help="input text files, one document per line")
        for opt in opts:
            if opt.default is _REQUIRED:
                note = " (required)"
            elif opt.default is None:
                note = ""
            else:
                note = f" (default: {_render_default(opt.default)})"
            kwargs = dict(dest=opt.dest, default=argparse.SUPPRESS,
                          help=opt.help + note)
            if opt.type is _boolish:
                kwargs.update(action="store_true")
            else:
                kwargs.update(type=opt.type,
                              metavar=opt.metavar or opt.dest.upper())
            p.add_argument(opt.flag, **kwargs)
    return parser


def _render_default(value: Any) -> str:
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


def _read_config(path: str) -> dict[str, str]:
    overrides = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            overrides[key.strip().replace("-", "_")] = value.strip()
    return overrides


def _merge(args: argparse.Namespace, command: str) -> dict[str, Any]:
    """flag > config file > built-in default; missing required flags are
    usage errors."""
    supplied = vars(args)
    config: dict[str, str] = {}
    if supplied.get("config"):
        try:
            config = _read_config(supplied["config"])
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
    merged: dict[str, Any] = {}
    for opt in _OPTIONS[command]:
        if opt.dest in supplied:
            merged[opt.dest] = supplied[opt.dest]
        elif opt.dest in config:
            try:
                merged[opt.dest] = opt.type(config[opt.dest])
            except ValueError as exc:
                raise UsageError(f"config {opt.flag}: {exc}")
        elif opt.default is _REQUIRED:
            raise UsageError(f"{opt.flag} is required for '{command}'")
        else:
            merged[opt.dest] = opt.default
    if command == "cooccur":
        merged["corpus"] = supplied["corpus"]
    return merged


def _cap_threads(threads: int | None) -> None:
    if threads is None:
        return
    if threads < 1:
        raise UsageError(f"--threads must be >= 1, got {threads}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ[var] = str(threads)


def _cmd_cooccur(o: dict[str, Any]) -> int:
    from .cooccur import build_cooccurrence
    from .corpus import build_vocabulary, default_config, tokenize

    cfg = default_config()

    def documents():
        for path in o["corpus"]:
            with open(path, encoding="utf-8") as f:
                for line in f:
                    yield tokenize(line, cfg)

    counts_stream = (tok for doc in documents() for tok in doc)
    vocab = build_vocabulary(counts_stream, o["min_count"])
    matrix = build_cooccurrence(documents(), vocab, o["window"])
    matrix.save(o["out"])
    vocab.save(o["vocab_out"] or o["out"] + ".vocab")
    print(f"{len(vocab)} words, {matrix.nnz} non-zero cells -> {o['out']}")
    return 0


def _build_hp(o: dict[str, Any], epochs: int, mu: float, g_fill: float = 0.0):
    from .objective import HyperParams
    try:
        return HyperParams(dim=o["dim"], alpha=o["alpha"], x_max=o["x_max"],
                           learning_rate=o["lr"], mu=mu, epochs=epochs,
                           g_fill=g_fill, seed=o["seed"])
    except ValueError as exc:
        raise UsageError(str(exc))


def _cmd_train(o: dict[str, Any]) -> int:
    from .cooccur import CooccurrenceMatrix
    from .corpus import Vocabulary
    from .embedding_io import read_embeddings, resolve_priors, write_embeddings
    from .trainer import compose_embeddings, train

    hp = _build_hp(o, epochs=o["epochs"], mu=o["mu"], g_fill=o["g_fill"])
    if o["init_at_priors"] and not o["priors"]:
        raise UsageError("--init-at-priors requires --priors")

    matrix = CooccurrenceMatrix.load(o["cooc"])
    vocab_path = o["vocab"] or o["cooc"] + ".vocab"
    vocab = None
    if os.path.exists(vocab_path):
        vocab = Vocabulary.load(vocab_path)
        if len(vocab) != matrix.dim:
            raise ValueError(
                f"vocabulary has {len(vocab)} words, matrix is {matrix.dim}")
    elif o["vocab"]:
        raise OSError(f"vocabulary file not found: {vocab_path}")

    priors = None
    if o["priors"]:
        if vocab is None:
            raise ValueError(
                "--priors needs a vocabulary file to resolve tokens "
                f"(none found at {vocab_path})")
        priors = resolve_priors(read_embeddings(o["priors"]), vocab,
                                expected_dim=hp.dim)
        print(f"{len(priors)} of {len(vocab)} words have priors", file=sys.stderr)

    on_epoch = None
    if not o["quiet"]:
        def on_epoch(epoch, cost, _seconds):
            print(f"epoch {epoch} cost {cost:.10g}", file=sys.stderr)

    result = train(matrix, hp, priors, init_at_priors=o["init_at_priors"],
                   on_epoch=on_epoch)
    tokens = vocab.tokens if vocab is not None else [
        f"w{i:05d}" for i in range(matrix.dim)]
    write_embeddings(zip(tokens, compose_embeddings(result.params)), o["out"])
    if o["report"]:
        with open(o["report"], "w", encoding="utf-8") as f:
            f.write("epoch,cost,seconds\n")
            rep = result.report
            for epoch, (cost, secs) in enumerate(zip(rep.costs, rep.seconds)):
                f.write(f"{epoch},{cost!r},{secs!r}\n")
    return 0


def _cmd_simulate(o: dict[str, Any]) -> int:
    from .analysis import (CORRELATION_MODES, SimulationSpec, run_mu_sweep,
                           write_sweep_csv)

    if o["mode"] not in CORRELATION_MODES:
        raise UsageError(f"--mode must be one of {', '.join(CORRELATION_MODES)}")
    hp = _build_hp(o, epochs=o["epochs"], mu=0.0)
    try:
        spec = SimulationSpec(vocab_size=o["size"], density=o["density"],
                              prior_fraction=o["prior_frac"],
                              mu_grid=o["mu_grid"], trials=o["trials"],
                              seed=o["seed"])
    except ValueError as exc:
        raise UsageError(str(exc))

    progress = None
    if not o["quiet"]:
        def progress(trial, mu):
            print(f"trial {trial} mu {mu:g}", file=sys.stderr)

    result = run_mu_sweep(spec, hp, mode=o["mode"], progress=progress)
    write_sweep_csv(result, o["out"])
    print(f"{len(result.rows)} rows -> {o['out']}")
    return 0


def _cmd_bench(o: dict[str, Any]) -> int:
    from .bench import BenchSpec, emit_bench_table, hardware_metadata, run_bench
    from .objective import HyperParams

    try:
        spec = BenchSpec(vocab_sizes=o["sizes"], density=o["density"],
                         iterations_per_corpus=o["iters"], corpora=o["corpora"],
                         seed=o["seed"])
        hp = HyperParams(dim=o["dim"], mu=0.0, seed=o["seed"])
    except ValueError as exc:
        raise UsageError(str(exc))

    progress = None
    if not o["quiet"]:
        def progress(arm, size, corpus):
            print(f"{arm} size {size} corpus {corpus}", file=sys.stderr)

    results = run_bench(spec, hp, progress=progress)
    table = emit_bench_table(results, o["out"],
                             metadata=hardware_metadata(threads=o.get("threads")))
    print(table)
    return 0


def _cmd_featurize(o: dict[str, Any]) -> int:
    from .corpus import default_config, tokenize
    from .embedding_io import read_embeddings
    from .featurize import sum_features

    emb = read_embeddings(o["embeddings"])
    if len(emb) == 0:
        raise ValueError(f"no embeddings in {o['embeddings']}")
    cfg = default_config()
    rows = 0
    with open(o["in"], encoding="utf-8") as src, \
            open(o["out"], "w", encoding="utf-8") as dst:
        for line in src:
            doc = sum_features(tokenize(line, cfg), emb)
            dst.write(",".join(f"{v:.6g}" for v in doc.vector) + "\n")
            rows += 1
    print(f"{rows} documents -> {o['out']}")
    return 0


_COMMANDS = {
    "cooccur": _cmd_cooccur,
    "train": _cmd_train,
    "simulate": _cmd_simulate,
    "bench": _cmd_bench,
    "featurize": _cmd_featurize,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        merged = _merge(args, args.command)
        _cap_threads(merged.get("threads"))
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](merged)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary: report and exit 2
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
