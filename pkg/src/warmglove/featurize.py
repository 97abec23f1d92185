"""Document vectors as sums of word vectors, for downstream classifiers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedding_io import EmbeddingFile


@dataclass
class DocumentVector:
    vector: np.ndarray
    tokens_used: int
    tokens_oov: int


def sum_features(tokens: Sequence[str], embeddings: EmbeddingFile) -> DocumentVector:
    """Elementwise sum of the vectors of in-vocabulary tokens.

    Out-of-vocabulary tokens are counted and skipped. Accumulation is
    grouped by token in sorted order, so any reordering of the input
    produces the bit-identical vector. Empty or fully-OOV input yields the
    zero vector.
    """
    if len(embeddings) == 0:
        raise ValueError("empty embedding set")
    out = np.zeros(embeddings.dim)
    used = 0
    oov = 0
    counts = Counter(tokens)
    for token in sorted(counts):
        row = embeddings.index.get(token)
        if row is None:
            oov += counts[token]
        else:
            out += counts[token] * embeddings.vectors[row]
            used += counts[token]
    return DocumentVector(vector=out, tokens_used=used, tokens_oov=oov)
