"""AFS partition matrices built from the within-slice order of expression values.

For a simple concept such as "large value under condition j", the sub-preference
set of a gene is the set of genes it weakly dominates.  With the counting measure
the membership is the fraction of the universe in that set, so

    U_G[i, j] = #{k : a[k, j] <= a[i, j]} / N      (genes as universe)
    U_C[i, j] = #{l : a[i, l] <= a[i, j]} / M      (conditions as universe)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr_matrix import ExpressionMatrix

GENES = "genes"
CONDITIONS = "conditions"


@dataclass(frozen=True, eq=False)
class PartitionMatrix:
    memberships: np.ndarray
    orientation: str

    def __post_init__(self):
        if self.orientation not in (GENES, CONDITIONS):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        self.memberships.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.memberships.shape


@dataclass(frozen=True, eq=False)
class DeltaMatrix:
    """Absolute membership differences to a reference gene's row of U_G."""

    deltas: np.ndarray
    reference: int


def _dominated_counts(values: np.ndarray) -> np.ndarray:
    # count of entries <= x within each column, ties included
    counts = np.empty(values.shape, dtype=np.int64)
    for j in range(values.shape[1]):
        col = values[:, j]
        counts[:, j] = np.searchsorted(np.sort(col), col, side="right")
    return counts


def build_partition(m: ExpressionMatrix | np.ndarray, orientation: str = GENES) -> PartitionMatrix:
    """Counting-measure AFS memberships with genes or conditions as the universe."""
    values = m.values if isinstance(m, ExpressionMatrix) else np.asarray(m, dtype=np.float64)
    if orientation == GENES:
        memberships = _dominated_counts(values) / values.shape[0]
    elif orientation == CONDITIONS:
        memberships = (_dominated_counts(values.T) / values.shape[1]).T.copy()
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return PartitionMatrix(memberships, orientation)


def delta_matrix(u_g: PartitionMatrix, g_star: int) -> DeltaMatrix:
    if u_g.orientation != GENES:
        raise ValueError("delta matrix needs the genes-as-universe partition")
    n = u_g.shape[0]
    if not 0 <= g_star < n:
        raise IndexError(f"reference gene {g_star} out of range for {n} genes")
    deltas = np.abs(u_g.memberships - u_g.memberships[g_star])
    deltas.setflags(write=False)
    return DeltaMatrix(deltas, int(g_star))
