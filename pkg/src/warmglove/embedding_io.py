"""Plain-text embedding files and prior resolution.

The interchange format is the one the widely published pretrained vectors
use: no header, one ``token v1 v2 ... vd`` line per word, single spaces,
decimal floats, UTF-8. Written floats carry 6 significant digits, so a
write/read round trip is exact to about 1e-5 absolute for unit-scale
vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .corpus import Vocabulary
from .objective import PriorEmbeddings, ShapeMismatchError


@dataclass
class EmbeddingFile:
    """Ordered (token, vector) records with unique tokens."""

    tokens: list[str]
    vectors: np.ndarray
    index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.size == 0 and self.vectors.ndim != 2:
            self.vectors = self.vectors.reshape(0, 0)
        if self.vectors.ndim != 2 or len(self.vectors) != len(self.tokens):
            raise ShapeMismatchError(
                f"{len(self.tokens)} tokens vs vector block {self.vectors.shape}")
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate token in embedding records")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def records(self) -> Iterable[tuple[str, np.ndarray]]:
        return zip(self.tokens, self.vectors)


def read_embeddings(path) -> EmbeddingFile:
    """Parse an embedding file; empty file gives zero records."""
    tokens: list[str] = []
    rows: list[list[float]] = []
    dim = None
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: no vector components")
            try:
                vec = [float(p) for p in parts[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad float: {exc}") from exc
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise ValueError(
                    f"{path}:{lineno}: vector has {len(vec)} components, "
                    f"expected {dim}")
            tokens.append(parts[0])
            rows.append(vec)
    vectors = np.asarray(rows, dtype=np.float64) if rows else np.zeros((0, 0))
    try:
        return EmbeddingFile(tokens=tokens, vectors=vectors)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def write_embeddings(records, path) -> None:
    """Write records (an EmbeddingFile or (token, vector) pairs) to ``path``."""
    if isinstance(records, EmbeddingFile):
        records = records.records()
    dim = None
    with open(path, "w", encoding="utf-8") as f:
        for token, vec in records:
            vec = np.asarray(vec, dtype=np.float64)
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise ShapeMismatchError(
                    f"vector for {token!r} has {len(vec)} components, expected {dim}")
            f.write(token + " " + " ".join(f"{v:.6g}" for v in vec) + "\n")


def resolve_priors(emb: EmbeddingFile, vocab: Vocabulary,
                   expected_dim: int | None = None) -> PriorEmbeddings:
    """Intersect an embedding file with a vocabulary.

    The anchor set is exactly the vocabulary ids whose tokens appear in
    ``emb`` (case-sensitive; the tokenizer already normalized case, and
    folding again would merge pairs like "US"/"us"). A disjoint pair of
    vocabularies yields an empty anchor set, which downstream reduces the
    retrofitting objective to the plain one.
    """
    if expected_dim is not None and len(emb) > 0 and emb.dim != expected_dim:
        raise ShapeMismatchError(
            f"prior embeddings have dim {emb.dim}, training dim is {expected_dim}")
    ids = sorted(vocab.index[t] for t in vocab.tokens if t in emb.index)
    dim = emb.dim if len(emb) > 0 else (expected_dim or 0)
    if not ids:
        return PriorEmbeddings(indices=np.zeros(0, dtype=np.int64),
                               vectors=np.zeros((0, dim)))
    vecs = np.stack([emb.vectors[emb.index[vocab.tokens[i]]] for i in ids])
    return PriorEmbeddings(indices=np.asarray(ids, dtype=np.int64), vectors=vecs)
