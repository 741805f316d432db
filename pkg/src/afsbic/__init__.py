"""Fuzzy bi-clustering of gene expression matrices with AFS partition matrices."""

from .cheng_church import CcConfig, cc_discover, cc_node_addition, cc_node_deletion
from .expr_matrix import (
    LABELED,
    PLAIN,
    BiclusterIndex,
    ExpressionMatrix,
    MatrixFormatError,
    MissingPolicy,
    load_matrix,
    submatrix,
    write_matrix,
)
from .metrics import BiclusterMetrics, angle_matrix, evaluate, mfd_index, msr_index, var_index
from .partition import CONDITIONS, GENES, DeltaMatrix, PartitionMatrix, build_partition, delta_matrix
from .references import (
    ReferenceScore,
    fcm_membership,
    reference_scores,
    select_references,
    similarity_slice,
)
from .search import (
    Bicluster,
    SearchConfig,
    col_score,
    discover,
    mu_score,
    node_addition,
    node_deletion,
    row_score,
    u_score,
)

__version__ = "0.1.0"
