"""Distance-weighted co-occurrence counting and the sparse matrix it fills.

Counting scans each document once, looking left from every position:
a pair at distance d (1 <= d <= window) adds 1/d to both X[i, j] and
X[j, i], so the matrix is symmetric by construction and the diagonal
receives both increments. Out-of-vocabulary tokens keep their positions
(they stretch distances) but never produce entries. Windows do not cross
document boundaries.

Accumulation happens in one hash map per document; per-document maps are
merged by entrywise addition. That makes building ``[d1, d2]`` in one call
bit-identical to building ``[d1]`` and ``[d2]`` separately and adding the
results, and it is the same merge a parallel builder would use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .corpus import Vocabulary

INVERSE_DISTANCE = "inverse-distance"


@dataclass
class CooccurrenceMatrix:
    """Sparse symmetric matrix in sorted coordinate form.

    ``rows``/``cols``/``vals`` store every non-zero cell (both (i, j) and
    (j, i)), sorted by (row, col). Absent cells are exactly zero; stored
    values are strictly positive. ``window`` is provenance only and is 0
    for matrices that were simulated or loaded from a file.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    window: int = 0
    weighting: str = INVERSE_DISTANCE

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def entries(self) -> Iterator[tuple[int, int, float]]:
        for i, j, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            yield i, j, v

    def todict(self) -> dict[tuple[int, int], float]:
        return {(i, j): v for i, j, v in self.entries()}

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.dim, self.dim))
        dense[self.rows, self.cols] = self.vals
        return dense

    @classmethod
    def from_entries(cls, dim: int, entries: dict[tuple[int, int], float],
                     window: int = 0) -> "CooccurrenceMatrix":
        """Finalize a (i, j) -> value map into sorted coordinate arrays."""
        keys = sorted(entries)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int32, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int32, count=len(keys))
        vals = np.fromiter((entries[k] for k in keys), dtype=np.float64, count=len(keys))
        return cls._checked(dim, rows, cols, vals, window)

    @classmethod
    def from_upper(cls, dim: int, rows, cols, vals, window: int = 0) -> "CooccurrenceMatrix":
        """Build a symmetric matrix from upper-triangle (i <= j) triples."""
        rows = np.asarray(rows, dtype=np.int32)
        cols = np.asarray(cols, dtype=np.int32)
        vals = np.asarray(vals, dtype=np.float64)
        if np.any(rows > cols):
            raise ValueError("from_upper requires i <= j triples")
        off = rows != cols
        full_r = np.concatenate([rows, cols[off]])
        full_c = np.concatenate([cols, rows[off]])
        full_v = np.concatenate([vals, vals[off]])
        order = np.lexsort((full_c, full_r))
        return cls._checked(dim, full_r[order], full_c[order], full_v[order], window)

    @classmethod
    def _checked(cls, dim, rows, cols, vals, window) -> "CooccurrenceMatrix":
        if len(vals) and (rows.min() < 0 or cols.min() < 0
                          or rows.max() >= dim or cols.max() >= dim):
            raise ValueError("coordinate outside [0, dim)")
        if np.any(vals <= 0):
            raise ValueError("stored co-occurrence values must be > 0")
        return cls(dim=dim, rows=rows, cols=cols, vals=vals, window=window)

    def add(self, other: "CooccurrenceMatrix") -> "CooccurrenceMatrix":
        """Entrywise sum; the merge used for per-document partial matrices."""
        if self.dim != other.dim:
            raise ValueError(f"dim mismatch: {self.dim} vs {other.dim}")
        merged = self.todict()
        for k, v in other.todict().items():
            merged[k] = merged.get(k, 0.0) + v
        return CooccurrenceMatrix.from_entries(self.dim, merged, window=0)

    def save(self, path) -> None:
        """Write ``dim nnz`` then sorted ``i j value`` triples, i <= j only."""
        keep = self.rows <= self.cols
        r, c, v = self.rows[keep], self.cols[keep], self.vals[keep]
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{self.dim} {len(v)}\n")
            for i, j, x in zip(r.tolist(), c.tolist(), v.tolist()):
                f.write(f"{i} {j} {x!r}\n")

    @classmethod
    def load(cls, path) -> "CooccurrenceMatrix":
        with open(path, encoding="utf-8") as f:
            header = f.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}:1: expected 'dim nnz' header")
            dim, nnz = int(header[0]), int(header[1])
            rows = np.empty(nnz, dtype=np.int32)
            cols = np.empty(nnz, dtype=np.int32)
            vals = np.empty(nnz, dtype=np.float64)
            seen = 0
            for n, line in enumerate(f):
                if not line.strip():
                    continue
                if seen >= nnz:
                    raise ValueError(f"{path}: more triples than header nnz={nnz}")
                parts = line.split()
                if len(parts) != 3:
                    raise ValueError(f"{path}:{n + 2}: expected 'i j value'")
                try:
                    rows[seen] = int(parts[0])
                    cols[seen] = int(parts[1])
                    vals[seen] = float(parts[2])
                except ValueError as exc:
                    raise ValueError(f"{path}:{n + 2}: {exc}") from exc
                seen += 1
            if seen != nnz:
                raise ValueError(f"{path}: {seen} triples, header says {nnz}")
        return cls.from_upper(dim, rows, cols, vals)


def build_cooccurrence(docs: Iterable[Sequence[str]], vocab: Vocabulary,
                       window: int) -> CooccurrenceMatrix:
    """Count distance-weighted co-occurrences over tokenized documents."""
    if len(vocab) == 0:
        raise ValueError("empty vocabulary")
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    index = vocab.index
    total: dict[tuple[int, int], float] = {}
    for doc in docs:
        part: dict[tuple[int, int], float] = {}
        ids = [index.get(tok, -1) for tok in doc]
        for p, i in enumerate(ids):
            if i < 0:
                continue
            # nearest neighbor first (d ascending); the accumulation order
            # is part of the bit-exactness contract
            for d in range(1, min(window, p) + 1):
                j = ids[p - d]
                if j < 0:
                    continue
                w = 1.0 / d
                key = (i, j)
                part[key] = part.get(key, 0.0) + w
                key = (j, i)
                part[key] = part.get(key, 0.0) + w
        for k, v in part.items():
            total[k] = total.get(k, 0.0) + v
    return CooccurrenceMatrix.from_entries(len(vocab), total, window=window)


def matrix_stats(x: CooccurrenceMatrix) -> dict[str, float]:
    """Fraction of non-zero cells and the sum of all stored counts."""
    return {
        "nonzero_fraction": x.nnz / (x.dim * x.dim),
        "total_mass": float(np.sum(x.vals)),
    }
