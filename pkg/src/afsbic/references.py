"""Reference-gene scoring with fixed-prototype two-cluster fuzzy memberships.

Each gene i is scored per condition j by how many genes look like it there.
The similarity of gene k to gene i is ``1 - |U_G[k, j] - U_G[i, j]|``; the
similarity vector is split by FCM memberships against two fixed prototypes,
its max and its min, and the genes closer to the max prototype are averaged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partition import GENES, PartitionMatrix


@dataclass(frozen=True)
class ReferenceScore:
    gene: int
    varpi: float
    accepted_counts: tuple[int, ...]


def similarity_slice(u_g: PartitionMatrix, j: int, i: int) -> np.ndarray:
    col = u_g.memberships[:, j]
    return 1.0 - np.abs(col - col[i])


def _first_membership(s: np.ndarray, v1, v2, m: float) -> np.ndarray:
    """Membership of ``s`` in the first of two scalar prototypes.

    Broadcasts over ``s``, ``v1`` and ``v2``.  A zero distance puts the point
    wholly in that prototype (first one wins); equal prototypes give 1.  The
    membership exceeds one half exactly when ``s`` lies above the midpoint of
    the prototypes, also where rounding of the distances would blur it.
    """
    d1 = np.abs(s - v1)
    d2 = np.abs(s - v2)
    p = 2.0 / (m - 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # d1^-p / (d1^-p + d2^-p) written as a ratio so large p cannot overflow to inf/inf
        phi = 1.0 / (1.0 + (d1 / d2) ** p)
    side = np.sign(s - (np.asarray(v1) + np.asarray(v2)) / 2)
    phi = np.where((side > 0) & (phi <= 0.5), np.nextafter(0.5, 1.0), phi)
    phi = np.where((side < 0) & (phi >= 0.5), np.nextafter(0.5, 0.0), phi)
    phi = np.where(side == 0, 0.5, phi)
    # a prototype hit exactly wins even when the midpoint rounds onto it
    phi = np.where(d2 == 0, 0.0, phi)
    phi = np.where(d1 == 0, 1.0, phi)
    return np.where(np.asarray(v1) == np.asarray(v2), 1.0, phi)


def fcm_membership(slice: np.ndarray, m: float = 2.0) -> np.ndarray:
    """N x 2 memberships of a similarity slice in its (max, min) prototypes."""
    if not m > 1:
        raise ValueError(f"fuzziness must exceed 1, got {m}")
    s = np.asarray(slice, dtype=np.float64)
    phi1 = _first_membership(s, s.max(), s.min(), m)
    return np.column_stack([phi1, 1.0 - phi1])


def reference_scores(u_g: PartitionMatrix, m: float = 2.0, block: int = 512) -> list[ReferenceScore]:
    """Score every gene as a candidate reference, best first.

    The per-condition score is the mean similarity of the genes whose
    membership in the max prototype exceeds one half; the gene's score is the
    average of that over conditions.

    That membership exceeds one half exactly when a gene is closer to the max
    prototype than to the min, whatever the fuzziness ``m``.  The test is run
    on the integer counts behind the memberships so genes lying on the
    midpoint are never admitted by rounding.
    """
    if u_g.orientation != GENES:
        raise ValueError("reference scoring needs the genes-as-universe partition")
    if not m > 1:
        raise ValueError(f"fuzziness must exceed 1, got {m}")
    mu = u_g.memberships
    n, n_cond = mu.shape
    counts_g = np.rint(mu * n).astype(np.int64)
    totals = np.zeros(n)
    counts = np.zeros((n, n_cond), dtype=np.int64)
    for j in range(n_cond):
        col = mu[:, j]
        cnt = counts_g[:, j]
        # one block of reference genes at a time; sims[k, c] is gene k's similarity to gene start+c
        for start in range(0, n, block):
            stop = min(start + block, n)
            sims = 1.0 - np.abs(col[:, None] - col[None, start:stop])
            # distance to the max prototype is gap, to the min prototype widest - gap
            gap = np.abs(cnt[:, None] - cnt[None, start:stop])
            widest = gap.max(axis=0)
            accepted = (2 * gap < widest) | (widest == 0)
            k = accepted.sum(axis=0)
            # summed in sorted order so the result does not depend on gene order
            mass = np.sort(np.where(accepted, sims, 0.0), axis=0).sum(axis=0)
            with np.errstate(invalid="ignore", divide="ignore"):
                totals[start:stop] += np.where(k > 0, mass / k, 0.0)
            counts[start:stop, j] = k
    varpi = totals / n_cond
    order = sorted(range(n), key=lambda i: (-varpi[i], i))
    return [ReferenceScore(i, float(varpi[i]), tuple(int(c) for c in counts[i])) for i in order]


def select_references(scores: list[ReferenceScore], k: int) -> list[int]:
    if not 1 <= k <= len(scores):
        raise ValueError(f"k must be in [1, {len(scores)}], got {k}")
    return [s.gene for s in scores[:k]]
