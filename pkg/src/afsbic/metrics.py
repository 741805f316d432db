"""Bicluster quality indexes: VAR, MFD and the Cheng-Church mean squared residue."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .expr_matrix import BiclusterIndex, ExpressionMatrix, submatrix_values


@dataclass(frozen=True)
class BiclusterMetrics:
    var: float
    mfd: float
    msr: float
    rows: int
    cols: int

    def as_dict(self) -> dict:
        return asdict(self)


def _values(sub) -> np.ndarray:
    if isinstance(sub, ExpressionMatrix):
        return sub.values
    arr = np.asarray(sub, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-d submatrix, got shape {arr.shape}")
    return arr


def var_index(sub) -> float:
    """Sum of squared deviations from the grand mean; zero for a constant block."""
    a = _values(sub)
    return float(((a - a.mean()) ** 2).sum())


def angle_matrix(sub) -> np.ndarray:
    """Trend angles in degrees for each row and each adjacent column transition.

    Differences between neighbouring columns are divided by the row's range
    over ``|J| - 1`` steps, so a row rising evenly across its range gives 45
    degrees everywhere.  Constant rows give zero angles.
    """
    a = _values(sub)
    n_cols = a.shape[1]
    if n_cols < 2:
        raise ValueError("angles need at least two columns")
    diffs = np.diff(a, axis=1)
    scale = (a.max(axis=1) - a.min(axis=1)) / (n_cols - 1)
    # pseudo-inverse of the diagonal scale: rows with zero range keep zero slopes;
    # dividing directly keeps tiny ranges from overflowing the reciprocal
    slopes = np.zeros_like(diffs)
    np.divide(diffs, scale[:, None], out=slopes, where=scale[:, None] != 0)
    return np.degrees(np.arctan(slopes))


def mfd_index(sub) -> float:
    """RMS deviation of row trend angles from the per-transition mean angle."""
    theta = angle_matrix(sub)
    dev = theta - theta.mean(axis=0)
    return float(np.sqrt((dev ** 2).mean()))


def msr_index(sub) -> float:
    """Mean squared residue of the additive row-plus-column model."""
    a = _values(sub)
    residue = a - a.mean(axis=1, keepdims=True) - a.mean(axis=0, keepdims=True) + a.mean()
    return float((residue ** 2).mean())


def evaluate(m: ExpressionMatrix | np.ndarray, idx: BiclusterIndex, inverted_rows=()) -> BiclusterMetrics:
    """All three indexes for one bicluster of ``m``.

    VAR and MFD are measured on the raw submatrix.  MSR is measured with any
    ``inverted_rows`` negated, which is the block a Cheng-Church search scores.
    """
    sub = submatrix_values(m, idx)
    signed = sub
    if len(inverted_rows):
        flip = np.isin(np.asarray(idx.rows), list(inverted_rows))
        signed = np.where(flip[:, None], -sub, sub)
    mfd = mfd_index(sub) if sub.shape[1] >= 2 else 0.0
    return BiclusterMetrics(var_index(sub), mfd, msr_index(signed), *sub.shape)
