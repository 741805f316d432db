"""
Partition matrices from value order
===================================

Memberships depend only on how values rank within a column (genes as the
universe) or within a row (conditions as the universe).
"""

import numpy as np

from afsbic import CONDITIONS, GENES, ExpressionMatrix, build_partition, delta_matrix

a = np.array([
    [2.0, 10.0, 4.0],
    [5.0, 20.0, 1.0],
    [5.0, 30.0, 9.0],
    [9.0, 40.0, 3.0],
])
m = ExpressionMatrix(a)

# U_G: share of genes at or below each value in its column
u_g = build_partition(m, GENES)
print("U_G\n", u_g.memberships)

# U_C: share of conditions at or below each value in its row
u_c = build_partition(m, CONDITIONS)
print("U_C\n", u_c.memberships)

# ties count on both sides, so genes 1 and 2 share 0.75 in column 0
assert u_g.memberships[1, 0] == u_g.memberships[2, 0] == 0.75

# distance of every gene to a reference gene's U_G row
print("deltas to gene 0\n", delta_matrix(u_g, 0).deltas)

# any monotone rescaling leaves the memberships untouched
assert np.array_equal(build_partition(m.scaled(3.7), GENES).memberships, u_g.memberships)
assert np.array_equal(build_partition(ExpressionMatrix(np.log(a)), GENES).memberships, u_g.memberships)
