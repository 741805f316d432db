"""Seeded synthetic matrices with planted additive biclusters."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .expr_matrix import BiclusterIndex, ExpressionMatrix


def planted_matrix(
    n: int,
    m: int,
    shapes: Sequence[tuple[int, int]],
    seed: int = 0,
    noise: tuple[float, float] = (0.0, 600.0),
    block_noise: float = 0.0,
    disjoint_cols: bool = False,
) -> tuple[ExpressionMatrix, list[BiclusterIndex]]:
    """Uniform background with disjoint additive blocks ``b_i + c_j`` planted in it.

    Block rows are disjoint.  Block columns are drawn independently per block
    unless ``disjoint_cols`` is set, in which case they are disjoint too.
    Returns the matrix and the planted index sets.
    """
    rng = np.random.default_rng(seed)
    lo, hi = noise
    values = rng.uniform(lo, hi, size=(n, m))
    free_rows = rng.permutation(n)
    free_cols = rng.permutation(m)
    c0 = 0
    planted = []
    r0 = 0
    for rows_n, cols_n in shapes:
        rows = np.sort(free_rows[r0:r0 + rows_n])
        if len(rows) < rows_n or cols_n > m:
            raise ValueError("planted blocks do not fit in the matrix")
        if disjoint_cols:
            cols = np.sort(free_cols[c0:c0 + cols_n])
            c0 += cols_n
            if len(cols) < cols_n:
                raise ValueError("planted blocks do not fit in the matrix")
        else:
            cols = np.sort(rng.choice(m, size=cols_n, replace=False))
        r0 += rows_n
        span = hi - lo
        base = rng.uniform(lo + 0.3 * span, lo + 0.5 * span, size=rows_n)
        effect = rng.uniform(-0.2 * span, 0.2 * span, size=cols_n)
        block = base[:, None] + effect[None, :]
        if block_noise:
            block = block + rng.normal(0.0, block_noise, size=block.shape)
        values[np.ix_(rows, cols)] = block
        planted.append(BiclusterIndex(tuple(rows), tuple(cols)))
    return ExpressionMatrix(values), planted


def yeast_like(seed: int = 0) -> ExpressionMatrix:
    """A 2884 x 17 integer matrix on the Yeast value scale with a few planted blocks."""
    m, _ = planted_matrix(
        2884, 17, [(120, 8), (80, 6), (60, 5)], seed=seed, noise=(0.0, 600.0), block_noise=8.0
    )
    return ExpressionMatrix(np.round(m.values))
