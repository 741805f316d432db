"""
Quality indexes
===============

VAR measures spread around the block mean, MFD measures disagreement in
row trends, MSR measures departure from an additive row-plus-column model.
"""

import numpy as np

from afsbic import angle_matrix, mfd_index, msr_index, var_index

constant = np.full((3, 4), 7.0)
shifted = np.array([[1.0, 3.0, 2.0, 5.0]]) + np.array([[0.0], [10.0], [-4.0]])
scaled = np.array([[1.0, 3.0, 2.0, 5.0]]) * np.array([[1.0], [2.0], [3.0]])
opposite = np.array([[0.0, 1.0], [1.0, 0.0]])

for name, block in [("constant", constant), ("shifted", shifted), ("scaled", scaled), ("opposite", opposite)]:
    print(f"{name:9s} VAR {var_index(block):9.3f}  MFD {mfd_index(block):7.3f}  MSR {msr_index(block):8.3f}")

# shifted rows share their trend angles exactly
print(angle_matrix(shifted))
# scaled rows also agree in angle because each row is scaled by its own range
print(angle_matrix(scaled))
