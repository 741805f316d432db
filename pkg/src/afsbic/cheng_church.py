"""Cheng-Church biclustering driven by the mean squared residue.

Each bicluster is carved out of the full matrix by multiple then single node
deletion until its MSR is at most the threshold, regrown by node addition
(optionally with inverted rows), recorded, and masked with uniform random
values before the next search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .expr_matrix import BiclusterIndex, ExpressionMatrix
from .metrics import msr_index
from .search import Bicluster

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CcConfig:
    msr_threshold: float = 300.0
    k_biclusters: int = 100
    mask_range: Optional[tuple[float, float]] = None
    multiple_deletion_factor: float = 1.2
    multiple_deletion_min_size: int = 100
    inverted_rows: bool = True
    seed: int = 0

    def __post_init__(self):
        if not self.msr_threshold > 0:
            raise ValueError("msr_threshold must be positive")
        if self.multiple_deletion_factor < 1:
            raise ValueError("multiple_deletion_factor must be at least 1")
        if self.mask_range is not None and not self.mask_range[0] < self.mask_range[1]:
            raise ValueError("mask_range low must be below high")
        if self.k_biclusters < 1:
            raise ValueError("k_biclusters must be at least 1")


def _residues(block: np.ndarray) -> np.ndarray:
    return block - block.mean(axis=1, keepdims=True) - block.mean(axis=0, keepdims=True) + block.mean()


def _values(m) -> np.ndarray:
    return m.values if isinstance(m, ExpressionMatrix) else np.asarray(m, dtype=np.float64)


def cc_node_deletion(m, cfg: CcConfig, trace: list | None = None) -> BiclusterIndex:
    """Delete rows and columns until the MSR is at most ``cfg.msr_threshold``.

    While an axis is longer than ``cfg.multiple_deletion_min_size`` every
    element on it whose mean squared residue exceeds the factor times the MSR
    is removed at once; otherwise the single worst row or column goes.
    ``trace`` receives the MSR after every iteration.  Raises ``RuntimeError``
    if the threshold cannot be met before reaching a 2x2 block.
    """
    a = _values(m)
    rows = np.arange(a.shape[0])
    cols = np.arange(a.shape[1])
    big = cfg.multiple_deletion_min_size
    while True:
        block = a[np.ix_(rows, cols)]
        r2 = _residues(block) ** 2
        h = r2.mean()
        if trace is not None:
            trace.append(float(h))
        if h <= cfg.msr_threshold:
            return BiclusterIndex(tuple(rows), tuple(cols))

        if len(rows) > big or len(cols) > big:
            removed = False
            if len(rows) > big:
                keep = r2.mean(axis=1) <= cfg.multiple_deletion_factor * h
                if not keep.all() and keep.sum() >= 2:
                    rows, block, removed = rows[keep], block[keep], True
            if len(cols) > big:
                if removed:
                    r2 = _residues(block) ** 2
                    h = r2.mean()
                keep = r2.mean(axis=0) <= cfg.multiple_deletion_factor * h
                if not keep.all() and keep.sum() >= 2:
                    cols, removed = cols[keep], True
            if removed:
                continue

        d = r2.mean(axis=1)
        e = r2.mean(axis=0)
        drop_row = d.max() >= e.max()
        if drop_row and len(rows) <= 2:
            drop_row = False
        if not drop_row and len(cols) <= 2:
            drop_row = len(rows) > 2
            if not drop_row:
                raise RuntimeError("MSR threshold not reachable before a 2x2 block")
        if drop_row:
            rows = np.delete(rows, int(np.argmax(d)))
        else:
            cols = np.delete(cols, int(np.argmax(e)))


def cc_node_addition(
    m, idx: BiclusterIndex, cfg: CcConfig, inverted: frozenset = frozenset()
) -> tuple[BiclusterIndex, frozenset]:
    """Add columns, then rows, then inverted rows whose residue is within the MSR.

    Returns the grown index and the set of rows that enter negated.  A step
    whose additions would lift the MSR above the threshold is undone.
    """
    a = _values(m)
    n, n_cols = a.shape
    in_rows = np.zeros(n, dtype=bool)
    in_cols = np.zeros(n_cols, dtype=bool)
    in_rows[list(idx.rows)] = True
    in_cols[list(idx.cols)] = True
    sign = np.ones(n)
    sign[list(inverted)] = -1.0

    def signed_block():
        return (sign[:, None] * a)[np.ix_(in_rows, in_cols)]

    def msr_now():
        return msr_index(signed_block())

    while True:
        added = False
        s = sign[:, None] * a

        # columns
        block = s[np.ix_(in_rows, in_cols)]
        h = msr_index(block)
        row_mean = block.mean(axis=1, keepdims=True)
        all_cols = s[in_rows]
        col_mean = all_cols.mean(axis=0, keepdims=True)
        e = ((all_cols - row_mean - col_mean + block.mean()) ** 2).mean(axis=0)
        new_cols = ~in_cols & (e <= h)
        if new_cols.any():
            in_cols |= new_cols
            if msr_now() <= cfg.msr_threshold:
                added = True
            else:
                in_cols &= ~new_cols

        # rows, then inverted rows, against the same refreshed bicluster
        block = signed_block()
        h = msr_index(block)
        col_mean = block.mean(axis=0, keepdims=True)
        grand = block.mean()
        raw = a[:, in_cols]
        raw_mean = raw.mean(axis=1, keepdims=True)
        d = ((raw - raw_mean - col_mean + grand) ** 2).mean(axis=1)
        new_rows = ~in_rows & (d <= h)
        new_inv = np.zeros(n, dtype=bool)
        if cfg.inverted_rows:
            d_inv = ((-raw + raw_mean - col_mean + grand) ** 2).mean(axis=1)
            new_inv = ~in_rows & ~new_rows & (d_inv <= h)
        if new_rows.any() or new_inv.any():
            old_sign = sign.copy()
            sign[new_rows] = 1.0
            sign[new_inv] = -1.0
            in_rows |= new_rows | new_inv
            if msr_now() <= cfg.msr_threshold:
                added = True
            else:
                in_rows &= ~(new_rows | new_inv)
                sign = old_sign

        if not added:
            break

    rows = np.flatnonzero(in_rows)
    out = BiclusterIndex(tuple(rows), tuple(np.flatnonzero(in_cols)))
    return out, frozenset(int(i) for i in rows if sign[i] < 0)


def cc_discover(m: ExpressionMatrix, cfg: CcConfig = CcConfig()) -> list[Bicluster]:
    """Find ``cfg.k_biclusters`` biclusters, masking each one before the next."""
    a = np.array(_values(m), dtype=np.float64, copy=True)
    lo, hi = cfg.mask_range if cfg.mask_range is not None else (float(a.min()), float(a.max()))
    rng = np.random.default_rng(cfg.seed)
    found = []
    for _ in range(cfg.k_biclusters):
        try:
            idx = cc_node_deletion(a, cfg)
        except RuntimeError:
            log.warning("stopping after %d biclusters: threshold unreachable", len(found))
            break
        idx, inverted = cc_node_addition(a, idx, cfg)
        msr = msr_index(np.where(np.isin(idx.rows, list(inverted))[:, None], -1.0, 1.0)
                        * a[np.ix_(list(idx.rows), list(idx.cols))])
        if idx.is_reportable():
            found.append(Bicluster(idx, inverted_rows=tuple(sorted(inverted)), algorithm="cc",
                                   extra={"msr": msr}))
        a[np.ix_(list(idx.rows), list(idx.cols))] = rng.uniform(lo, hi, size=idx.shape)
    return found
