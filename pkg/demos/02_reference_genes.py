"""
Choosing reference genes
========================

A gene makes a good reference when, condition by condition, many genes sit
close to it in rank.  Each condition's similarity vector is split between a
"close" and a "far" prototype and the close side is averaged.
"""

import numpy as np

from afsbic import GENES, ExpressionMatrix, build_partition, fcm_membership, reference_scores, similarity_slice
from afsbic.synthetic import planted_matrix

# two-prototype memberships of one similarity slice
s = np.array([1.0, 0.9, 0.5, 0.25])
print(fcm_membership(s, m=2.0))

m, planted = planted_matrix(200, 10, [(30, 6)], seed=1)
u_g = build_partition(m, GENES)
print("similarity of all genes to gene 0 under condition 0:", similarity_slice(u_g, 0, 0)[:8], "...")

scores = reference_scores(u_g)
top = [s.gene for s in scores[:10]]
print("top ten references:", top)
print("their scores:", np.round([s.varpi for s in scores[:10]], 4))
print("planted genes among them:", len(set(top) & set(planted[0].rows)))
