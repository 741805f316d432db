"""Greedy bicluster search on the AFS partition matrices.

Column dissimilarity is the range of the reference-delta matrix over the
bicluster rows; row dissimilarity is the range of U_C over the bicluster
columns.  A bicluster is accepted when both averaged scores are at most the
full-matrix scores divided by ``alpha`` and ``beta``.

Averages are taken with :func:`math.fsum`, which rounds the exact sum once, so
every score is independent of summation order and incremental updates agree
bit-for-bit with recomputation from scratch.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .expr_matrix import BiclusterIndex, ExpressionMatrix
from .partition import CONDITIONS, GENES, DeltaMatrix, PartitionMatrix, build_partition, delta_matrix
from .references import reference_scores, select_references

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    alpha: float = 5.0
    beta: float = 1.8
    k_biclusters: int = 100
    dedupe_jaccard: float = 0.9
    fuzziness: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        if self.k_biclusters < 1:
            raise ValueError("k_biclusters must be at least 1")
        if not 0 <= self.dedupe_jaccard <= 1:
            raise ValueError("dedupe_jaccard must lie in [0, 1]")
        if not self.fuzziness > 1:
            raise ValueError("fuzziness must exceed 1")


@dataclass(frozen=True)
class Bicluster:
    """A discovered bicluster and the scores it was accepted with.

    ``reference`` and the two dissimilarity scores are set by the fuzzy
    search; the Cheng-Church baseline leaves them ``None`` and may flag
    ``inverted_rows`` instead.
    """

    index: BiclusterIndex
    reference: Optional[int] = None
    mu_score: Optional[float] = None
    u_score: Optional[float] = None
    degenerate: bool = False
    inverted_rows: tuple[int, ...] = ()
    algorithm: str = "fbc"
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def rows(self) -> tuple[int, ...]:
        return self.index.rows

    @property
    def cols(self) -> tuple[int, ...]:
        return self.index.cols


def _mean(values) -> float:
    values = list(values)
    return math.fsum(values) / len(values)


class _ExactSum:
    """Exact running sum of floats; ``float()`` of it equals ``math.fsum`` of the terms.

    Terms are held as integers in units of the smallest subnormal double.
    """

    _SHIFT = 1074
    _UNIT = 1 << _SHIFT

    def __init__(self, values=()):
        self.total = sum(map(self._scaled, values))

    @classmethod
    def _scaled(cls, x: float) -> int:
        num, den = float(x).as_integer_ratio()
        return num << (cls._SHIFT - den.bit_length() + 1)

    def add(self, x: float) -> None:
        self.total += self._scaled(x)

    def remove(self, x: float) -> None:
        self.total -= self._scaled(x)

    def mean(self, count: int) -> float:
        return (self.total / self._UNIT) / count

    def mean_with(self, x: float, count: int) -> float:
        return ((self.total + self._scaled(x)) / self._UNIT) / count


def col_score(d: DeltaMatrix, rows: Sequence[int], j: int) -> float:
    """Range of the delta column ``j`` over ``rows``."""
    rows = list(rows)
    if not rows:
        raise ValueError("col_score needs at least one row")
    col = d.deltas[rows, j]
    return float(col.max() - col.min())


def row_score(u_c: PartitionMatrix, i: int, cols: Sequence[int]) -> float:
    """Range of U_C row ``i`` over ``cols``."""
    cols = list(cols)
    if not cols:
        raise ValueError("row_score needs at least one column")
    row = u_c.memberships[i, cols]
    return float(row.max() - row.min())


def _col_ranges(deltas: np.ndarray, rows, cols) -> np.ndarray:
    sub = deltas[np.ix_(list(rows), list(cols))]
    return sub.max(axis=0) - sub.min(axis=0)


def _row_ranges(uc: np.ndarray, rows, cols) -> np.ndarray:
    sub = uc[np.ix_(list(rows), list(cols))]
    return sub.max(axis=1) - sub.min(axis=1)


def mu_score(d: DeltaMatrix, idx: BiclusterIndex) -> float:
    """Mean over bicluster columns of the delta column range."""
    return _mean(_col_ranges(d.deltas, idx.rows, idx.cols).tolist())


def u_score(u_c: PartitionMatrix, idx: BiclusterIndex) -> float:
    """Mean over bicluster rows of the U_C row range."""
    return _mean(_row_ranges(u_c.memberships, idx.rows, idx.cols).tolist())


@dataclass(frozen=True)
class _Thresholds:
    mu_full: float
    u_full: float
    mu_max: float
    u_max: float

    @classmethod
    def of(cls, d: DeltaMatrix, u_c: PartitionMatrix, cfg: SearchConfig) -> "_Thresholds":
        full = BiclusterIndex.full(*d.deltas.shape)
        mu_full = mu_score(d, full)
        u_full = u_score(u_c, full)
        return cls(mu_full, u_full, mu_full / cfg.alpha, u_full / cfg.beta)

    def met(self, mu: float, u: float) -> bool:
        return mu <= self.mu_max and u <= self.u_max


def _check_inputs(d: DeltaMatrix, u_c: PartitionMatrix) -> None:
    if u_c.orientation != CONDITIONS:
        raise ValueError("row scores need the conditions-as-universe partition")
    if d.deltas.shape != u_c.shape:
        raise ValueError("delta and partition matrices differ in shape")


def node_deletion(
    d: DeltaMatrix, u_c: PartitionMatrix, cfg: SearchConfig, trace: list | None = None
) -> Bicluster:
    """Shrink the full matrix one row or column at a time until both scores pass.

    Each step compares the worst column and the worst non-reference row by
    their scores normalised with the full-matrix score and scale factor, and
    removes the column on ties.  Once an axis is down to two elements the
    removal goes to the other axis; at 2 x 2 the search stops and the result
    is flagged degenerate.
    ``trace`` collects ``("row" | "col", index)`` for every removal.
    """
    _check_inputs(d, u_c)
    th = _Thresholds.of(d, u_c, cfg)
    deltas, uc = d.deltas, u_c.memberships
    n, m = deltas.shape
    g_star = d.reference
    alive = np.ones(n, dtype=bool)
    n_rows = n
    cols = list(range(m))

    # per-column extremes over the live rows, tracked by pointers into the sorted order
    order = np.argsort(deltas, axis=0, kind="stable")
    lo = np.zeros(m, dtype=np.int64)
    hi = np.full(m, n - 1, dtype=np.int64)
    col_r = deltas.max(axis=0) - deltas.min(axis=0)

    def refresh_rows():
        sub = uc[:, cols]
        ranges = sub.max(axis=1) - sub.min(axis=1)
        return ranges, _ExactSum(ranges[alive].tolist())

    row_r, row_sum = refresh_rows()

    while True:
        mu = _mean(col_r[cols].tolist())
        u = row_sum.mean(n_rows)
        if th.met(mu, u):
            break

        j_pos = int(np.argmax(col_r[cols]))
        candidates = np.where(alive, row_r, -np.inf)
        candidates[g_star] = -np.inf
        i_star = int(np.argmax(candidates))
        col_term = cfg.alpha * col_r[cols[j_pos]] / th.mu_full if th.mu_full > 0 else 0.0
        row_term = cfg.beta * row_r[i_star] / th.u_full if th.u_full > 0 else 0.0

        drop_col = col_term >= row_term
        # an axis already at two elements hands the removal to the other one
        if drop_col and len(cols) <= 2 or not drop_col and n_rows <= 2:
            drop_col = not drop_col
            if drop_col and len(cols) <= 2 or not drop_col and n_rows <= 2:
                rows = tuple(np.flatnonzero(alive))
                return Bicluster(BiclusterIndex(rows, tuple(cols)), g_star, mu, u, degenerate=True)

        if drop_col:
            if trace is not None:
                trace.append(("col", cols[j_pos]))
            del cols[j_pos]
            row_r, row_sum = refresh_rows()
        else:
            if trace is not None:
                trace.append(("row", i_star))
            alive[i_star] = False
            n_rows -= 1
            row_sum.remove(row_r[i_star])
            for j in range(m):
                moved = False
                while not alive[order[lo[j], j]]:
                    lo[j] += 1
                    moved = True
                while not alive[order[hi[j], j]]:
                    hi[j] -= 1
                    moved = True
                if moved:
                    col_r[j] = deltas[order[hi[j], j], j] - deltas[order[lo[j], j], j]

    rows = tuple(np.flatnonzero(alive))
    return Bicluster(BiclusterIndex(rows, tuple(cols)), g_star, mu, u)


def node_addition(d: DeltaMatrix, u_c: PartitionMatrix, b: Bicluster, cfg: SearchConfig) -> Bicluster:
    """Grow a threshold-satisfying bicluster by single rows and columns.

    Outside columns are tried in ascending order, each kept only if both
    thresholds still hold with it included; then outside rows the same way.
    Passes repeat until one adds nothing.
    """
    _check_inputs(d, u_c)
    if b.degenerate or not b.index.is_reportable():
        raise ValueError("node addition needs a non-degenerate bicluster")
    th = _Thresholds.of(d, u_c, cfg)
    deltas, uc = d.deltas, u_c.memberships
    n, m = deltas.shape
    in_rows = np.zeros(n, dtype=bool)
    in_cols = np.zeros(m, dtype=bool)
    in_rows[list(b.rows)] = True
    in_cols[list(b.cols)] = True

    # running extremes: delta columns over the current rows, U_C rows over the current columns
    col_lo = deltas[in_rows].min(axis=0)
    col_hi = deltas[in_rows].max(axis=0)
    row_lo = uc[:, in_cols].min(axis=1)
    row_hi = uc[:, in_cols].max(axis=1)

    mu = _mean((col_hi - col_lo)[in_cols].tolist())
    u = _mean((row_hi - row_lo)[in_rows].tolist())
    if not th.met(mu, u):
        raise ValueError("node addition needs a bicluster that satisfies both thresholds")

    while True:
        added = False
        for j in np.flatnonzero(~in_cols):
            col_ranges = (col_hi - col_lo)[in_cols].tolist()
            mu_new = _mean(col_ranges + [col_hi[j] - col_lo[j]])
            if mu_new > th.mu_max:
                continue
            grown = np.maximum(row_hi, uc[:, j]) - np.minimum(row_lo, uc[:, j])
            u_new = _mean(grown[in_rows].tolist())
            if u_new > th.u_max:
                continue
            in_cols[j] = True
            row_lo = np.minimum(row_lo, uc[:, j])
            row_hi = np.maximum(row_hi, uc[:, j])
            mu, u, added = mu_new, u_new, True

        row_sum = _ExactSum((row_hi - row_lo)[in_rows].tolist())
        n_rows = int(in_rows.sum())
        for i in np.flatnonzero(~in_rows):
            u_new = row_sum.mean_with(row_hi[i] - row_lo[i], n_rows + 1)
            if u_new > th.u_max:
                continue
            di = deltas[i]
            grown = np.maximum(col_hi, di) - np.minimum(col_lo, di)
            mu_new = _mean(grown[in_cols].tolist())
            if mu_new > th.mu_max:
                continue
            in_rows[i] = True
            col_lo = np.minimum(col_lo, di)
            col_hi = np.maximum(col_hi, di)
            row_sum.add(row_hi[i] - row_lo[i])
            n_rows += 1
            mu, u, added = mu_new, u_new, True

        if not added:
            break

    idx = BiclusterIndex(tuple(np.flatnonzero(in_rows)), tuple(np.flatnonzero(in_cols)))
    return Bicluster(idx, b.reference, mu, u)


def search_reference(
    u_g: PartitionMatrix, u_c: PartitionMatrix, g_star: int, cfg: SearchConfig
) -> Bicluster:
    """Node deletion then node addition around one reference gene."""
    d = delta_matrix(u_g, g_star)
    b = node_deletion(d, u_c, cfg)
    if b.degenerate:
        return b
    return node_addition(d, u_c, b, cfg)


def dedupe(biclusters: Sequence[Bicluster], max_jaccard: float) -> list[Bicluster]:
    """Drop each bicluster whose cell overlap with an earlier kept one exceeds ``max_jaccard``."""
    kept: list[Bicluster] = []
    for b in biclusters:
        if all(b.index.jaccard(k.index) <= max_jaccard for k in kept):
            kept.append(b)
    return kept


def discover(
    m: ExpressionMatrix,
    cfg: SearchConfig = SearchConfig(),
    refs: Optional[Sequence[int]] = None,
) -> list[Bicluster]:
    """Find up to ``cfg.k_biclusters`` biclusters, one per reference gene.

    Without explicit ``refs`` the best-scoring genes are used.  Degenerate
    searches and biclusters narrower than 2x2 are dropped, then near-duplicates
    (by cell Jaccard) are removed in reference order.
    """
    u_g = build_partition(m, GENES)
    u_c = build_partition(m, CONDITIONS)
    if refs is None:
        k = min(cfg.k_biclusters, m.n_genes)
        refs = select_references(reference_scores(u_g, cfg.fuzziness), k)
    else:
        refs = [int(r) for r in refs]
        for r in refs:
            if not 0 <= r < m.n_genes:
                raise IndexError(f"reference gene {r} out of range")

    found = []
    for g_star in refs:
        b = search_reference(u_g, u_c, g_star, cfg)
        if b.degenerate or not b.index.is_reportable():
            log.debug("reference %s gave a degenerate bicluster", g_star)
            continue
        found.append(b)
    kept = dedupe(found, cfg.dedupe_jaccard)
    if not kept:
        log.warning("no bicluster survived for %d references", len(refs))
    return kept
