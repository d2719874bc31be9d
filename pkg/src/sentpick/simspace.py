"""Similarity model over the embedding cloud.

Similarity between two sentences is the exponentiated negative Euclidean
distance between their embeddings, scaled by a concentration constant
``beta`` equal to the inverse of the mean pairwise distance over the
whole ground set. Values land in (0, 1] with a unit diagonal, and the
whole construction is invariant to scaling or translating the cloud.

A built model is immutable. By default the full n x n similarity matrix
is materialized; the lean mode keeps only per-sentence coverage totals
and recomputes similarity rows on demand, trading CPU for memory on
large ground sets. Both modes produce bit-identical numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from .corpus import EmbeddingMatrix
from .errors import DegenerateCloudError, SelectionError

# Row-block size for lean-mode scans; bounds peak memory at ~block * n floats.
_BLOCK = 256

# For n == 1 no pair exists and every beta yields the same (trivial)
# similarities; the model pins this documented placeholder.
_SINGLETON_BETA = 1.0


def _distance_rows(emb: np.ndarray, start: int, stop: int) -> np.ndarray:
    """Euclidean distances from rows [start, stop) to every row.

    Each pair is computed directly (squared terms accumulated in float64,
    one square root), so results do not depend on block boundaries.
    """
    return cdist(emb[start:stop], emb)


def compute_beta(emb: EmbeddingMatrix) -> float:
    """Inverse of the mean pairwise embedding distance.

    The mean runs over all ordered pairs, zero diagonal included in the
    sum but excluded from the n*(n-1) normalizer. Raises
    :class:`DegenerateCloudError` when every embedding is identical and
    :class:`SelectionError` for n < 2.
    """
    values = emb.values
    n = values.shape[0]
    if n < 2:
        raise SelectionError(f"concentration constant needs n >= 2, got n={n}")
    total = 0.0
    for start in range(0, n, _BLOCK):
        block = _distance_rows(values, start, min(start + _BLOCK, n))
        total += float(block.sum())
    mean = total / (n * (n - 1))
    if mean == 0.0:
        raise DegenerateCloudError(
            "degenerate embedding cloud: all embeddings identical"
        )
    return 1.0 / mean


def _row_sum_canonical(rows: np.ndarray) -> np.ndarray:
    # Summing each row in ascending sorted order makes rows that are
    # permutations of each other sum bit-identically, so mathematically
    # tied coverage totals stay exactly tied and the ascending-index
    # tie-break is meaningful.
    return np.sort(rows, axis=-1).sum(axis=-1)


@dataclass(frozen=True)
class SimilarityModel:
    """Similarity access plus precomputed per-sentence coverage totals.

    ``coverage_totals[s]`` is the sum of sim(s, y) over the entire ground
    set, self-similarity included.
    """

    beta: float
    n: int
    coverage_totals: np.ndarray = field(repr=False)
    _emb: np.ndarray = field(repr=False)
    _matrix: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def materialized(self) -> bool:
        return self._matrix is not None

    @property
    def sim_matrix(self) -> np.ndarray:
        """The full n x n similarity matrix (materialized mode only)."""
        if self._matrix is None:
            raise SelectionError(
                "similarity matrix not materialized; rebuild without lean mode"
            )
        return self._matrix

    def row(self, s: int) -> np.ndarray:
        """Similarities of sentence ``s`` to every sentence, length n."""
        if not 0 <= s < self.n:
            raise SelectionError(f"sentence index {s} out of range for n={self.n}")
        if self._matrix is not None:
            return self._matrix[s]
        row = np.exp(-self.beta * _distance_rows(self._emb, s, s + 1)[0])
        row.setflags(write=False)
        return row

    def _blocks(self):
        if self._matrix is not None:
            yield 0, self._matrix
            return
        for start in range(0, self.n, _BLOCK):
            stop = min(start + _BLOCK, self.n)
            yield start, np.exp(-self.beta * _distance_rows(self._emb, start, stop))

    def offdiagonal_stats(self) -> tuple[float, float, float]:
        """(mean, min, max) similarity over ordered pairs with s != y."""
        if self.n < 2:
            raise SelectionError("off-diagonal stats need n >= 2")
        total = 0.0
        lo, hi = np.inf, -np.inf
        for start, block in self._blocks():
            rows = block.copy()
            diag = np.arange(rows.shape[0])
            rows[diag, start + diag] = np.nan
            total += float(np.nansum(rows))
            lo = min(lo, float(np.nanmin(rows)))
            hi = max(hi, float(np.nanmax(rows)))
        return total / (self.n * (self.n - 1)), lo, hi


def build_similarity(emb: EmbeddingMatrix, materialize: bool = True) -> SimilarityModel:
    """Build the similarity model for an embedding matrix.

    ``materialize=False`` skips the n x n matrix and keeps only coverage
    totals; similarity rows are then recomputed on demand.
    """
    values = emb.values
    n = values.shape[0]
    if n == 1:
        totals = np.array([1.0])
        totals.setflags(write=False)
        matrix = np.array([[1.0]])
        matrix.setflags(write=False)
        return SimilarityModel(
            beta=_SINGLETON_BETA,
            n=1,
            coverage_totals=totals,
            _emb=values,
            _matrix=matrix if materialize else None,
        )
    beta = compute_beta(emb)
    if materialize:
        matrix = np.exp(-beta * cdist(values, values))
        matrix.setflags(write=False)
        totals = _row_sum_canonical(matrix)
    else:
        matrix = None
        totals = np.empty(n, dtype=np.float64)
        for start in range(0, n, _BLOCK):
            stop = min(start + _BLOCK, n)
            block = np.exp(-beta * _distance_rows(values, start, stop))
            totals[start:stop] = _row_sum_canonical(block)
    totals.setflags(write=False)
    return SimilarityModel(
        beta=beta, n=n, coverage_totals=totals, _emb=values, _matrix=matrix
    )


def nearest_neighbors(
    model: SimilarityModel, s: int, m: int
) -> list[tuple[int, float]]:
    """The m sentences most similar to ``s``, excluding ``s`` itself.

    Sorted by descending similarity; exact ties fall back to ascending
    index. ``m`` must satisfy 1 <= m <= n-1.
    """
    if not 0 <= s < model.n:
        raise SelectionError(f"sentence index {s} out of range for n={model.n}")
    if not 1 <= m <= model.n - 1:
        raise SelectionError(
            f"neighbor count m={m} out of range [1, {model.n - 1}]"
        )
    sims = model.row(s)
    # Stable sort on descending similarity keeps ascending-index ties.
    order = np.argsort(-sims, kind="stable")
    picked: list[tuple[int, float]] = []
    for idx in order:
        if idx == s:
            continue
        picked.append((int(idx), float(sims[idx])))
        if len(picked) == m:
            break
    return picked
