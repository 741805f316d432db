import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from afsbic.expr_matrix import ExpressionMatrix
from afsbic.partition import CONDITIONS, GENES, build_partition, delta_matrix


def column_matrix(col):
    # second column only pads the matrix to a valid width
    return ExpressionMatrix(np.column_stack([col, np.arange(len(col))]))


def test_ties_are_counted_inclusively():
    u = build_partition(column_matrix([2, 5, 5, 9]), GENES)
    assert u.memberships[:, 0].tolist() == [0.25, 0.75, 0.75, 1.0]


def test_constant_column_is_all_ones():
    u = build_partition(column_matrix([3.3] * 6), GENES)
    assert (u.memberships[:, 0] == 1.0).all()


def test_increasing_column_gives_rank_fractions():
    n = 7
    u = build_partition(column_matrix(np.linspace(-1, 4, n)), GENES)
    assert u.memberships[:, 0].tolist() == [k / n for k in range(1, n + 1)]


def test_conditions_orientation_ranks_within_rows():
    m = ExpressionMatrix([[3, 1, 2, 2], [0, 0, 0, 0]])
    u = build_partition(m, CONDITIONS)
    assert u.memberships.tolist() == [[1.0, 0.25, 0.75, 0.75], [1.0] * 4]


def test_delta_examples():
    u = build_partition(column_matrix([2, 5, 5, 9]), GENES)
    d = delta_matrix(u, 3)
    assert d.deltas[:, 0].tolist() == [0.75, 0.25, 0.25, 0.0]
    assert (d.deltas[3] == 0).all()


def test_genes_identical_to_reference_get_zero_rows(rng):
    a = rng.normal(size=(8, 5))
    a[[2, 5]] = a[0]
    d = delta_matrix(build_partition(ExpressionMatrix(a), GENES), 0)
    assert (d.deltas[[0, 2, 5]] == 0).all()


def test_delta_rejects_bad_inputs(rng):
    m = ExpressionMatrix(rng.normal(size=(4, 3)))
    with pytest.raises(IndexError):
        delta_matrix(build_partition(m, GENES), 4)
    with pytest.raises(ValueError):
        delta_matrix(build_partition(m, CONDITIONS), 0)


matrices = st.integers(2, 12).flatmap(
    lambda n: st.integers(2, 6).flatmap(
        lambda m: arrays(np.float64, (n, m), elements=st.sampled_from([-2.0, 0.0, 0.5, 1.0, 3.0, 7.25]))
        | arrays(np.float64, (n, m), elements=st.floats(-1e3, 1e3, allow_nan=False))
    )
)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_matches_counting_oracle_and_range(a):
    m = ExpressionMatrix(a)
    ug = build_partition(m, GENES).memberships
    uc = build_partition(m, CONDITIONS).memberships
    assert ug.tolist() == oracles.partition_genes(a.tolist())
    assert uc.tolist() == oracles.partition_conditions(a.tolist())
    for u in (ug, uc):
        assert (u > 0).all() and (u <= 1).all()
    assert (ug.max(axis=0) == 1).all() and (uc.max(axis=1) == 1).all()
    d = delta_matrix(build_partition(m, GENES), 0).deltas
    assert (d >= 0).all() and (d < 1).all()


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_memberships_are_monotone_in_values(a):
    ug = build_partition(ExpressionMatrix(a), GENES).memberships
    for j in range(a.shape[1]):
        order = np.argsort(a[:, j], kind="stable")
        assert (np.diff(ug[order, j]) >= 0).all()
    uc = build_partition(ExpressionMatrix(a), CONDITIONS).memberships
    for i in range(a.shape[0]):
        order = np.argsort(a[i], kind="stable")
        assert (np.diff(uc[i, order]) >= 0).all()


@pytest.mark.parametrize("transform", [np.exp, lambda x: 3 * x + 1, np.cbrt, lambda x: x ** 3])
def test_rank_invariance_under_monotone_column_transform(rng, transform):
    a = rng.normal(size=(30, 6))
    b = a.copy()
    b[:, 2] = transform(b[:, 2])
    ua = build_partition(ExpressionMatrix(a), GENES).memberships
    ub = build_partition(ExpressionMatrix(b), GENES).memberships
    np.testing.assert_array_equal(ua, ub)
