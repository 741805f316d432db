import numpy as np
import pytest

import oracles
from afsbic.cheng_church import CcConfig, cc_discover, cc_node_addition, cc_node_deletion
from afsbic.expr_matrix import BiclusterIndex, ExpressionMatrix
from afsbic.metrics import msr_index
from afsbic.synthetic import planted_matrix


def test_constant_and_additive_matrices_are_kept_whole(rng):
    full = BiclusterIndex.full(8, 5)
    assert cc_node_deletion(np.full((8, 5), 2.0), CcConfig()) == full
    additive = np.add.outer(rng.uniform(0, 50, 8), rng.uniform(0, 50, 5))
    assert cc_node_deletion(additive, CcConfig(msr_threshold=1e-6)) == full


def test_planted_block_is_recovered():
    m, (planted,) = planted_matrix(60, 12, [(10, 5)], seed=3)
    (b,) = cc_discover(m, CcConfig(msr_threshold=300, k_biclusters=1))
    assert b.index.jaccard(planted) >= 0.8
    assert b.extra["msr"] <= 300


@pytest.mark.parametrize("seed", range(8))
def test_two_planted_blocks_with_two_searches(seed):
    m, planted = planted_matrix(60, 12, [(12, 6), (12, 6)], seed=seed, disjoint_cols=True)
    found = cc_discover(m, CcConfig(msr_threshold=10, k_biclusters=2))
    assert len(found) == 2
    for p in planted:
        assert max(b.index.jaccard(p) for b in found) >= 0.8


def test_every_bicluster_meets_threshold_on_its_searched_matrix(rng):
    a = rng.uniform(0, 600, size=(120, 10))
    cfg = CcConfig(msr_threshold=300, k_biclusters=5, seed=2)
    found = cc_discover(ExpressionMatrix(a), cfg)
    assert found
    for b in found:
        assert b.extra["msr"] <= cfg.msr_threshold
        assert b.index.is_reportable()


def test_same_seed_same_biclusters(rng):
    m = ExpressionMatrix(rng.uniform(0, 600, size=(90, 9)))
    cfg = CcConfig(msr_threshold=400, k_biclusters=4, seed=11)
    assert cc_discover(m, cfg) == cc_discover(m, cfg)


def test_deletion_trace_never_increases(rng):
    for size in ((40, 8), (150, 12)):
        trace = []
        cc_node_deletion(rng.uniform(0, 600, size=size), CcConfig(), trace=trace)
        assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))
        assert trace[-1] <= 300


def test_multiple_deletion_engages_above_the_size_limit(rng):
    a = rng.uniform(0, 600, size=(300, 10))
    trace = []
    cc_node_deletion(a, CcConfig(), trace=trace)
    single = []
    cc_node_deletion(a, CcConfig(multiple_deletion_min_size=10_000), trace=single)
    assert len(trace) < len(single)


def test_unreachable_threshold_raises():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(RuntimeError):
        cc_node_deletion(a, CcConfig(msr_threshold=1e-9))


def test_addition_brings_in_inverted_row():
    profile = np.array([1.0, 5.0, 2.0, 8.0])
    a = np.vstack([profile + k for k in range(4)] + [-profile + 3.0, [9.0, 0.0, 9.0, 0.0]])
    start = BiclusterIndex((0, 1, 2, 3), (0, 1, 2, 3))
    idx, inverted = cc_node_addition(a, start, CcConfig(msr_threshold=0.5))
    assert 4 in idx.rows and inverted == {4}
    assert 5 not in idx.rows
    off, none_inv = cc_node_addition(a, start, CcConfig(msr_threshold=0.5, inverted_rows=False))
    assert 4 not in off.rows and not none_inv


def test_addition_readds_a_duplicate_row():
    profile = np.array([1.0, 5.0, 2.0, 8.0])
    a = np.vstack([profile, profile + 1, profile + 2, profile + 1])
    idx, _ = cc_node_addition(a, BiclusterIndex((0, 1, 2), (0, 1, 2, 3)), CcConfig(msr_threshold=1.0))
    assert idx.rows == (0, 1, 2, 3)


def test_msr_matches_oracle_on_found_block(rng):
    m, _ = planted_matrix(50, 8, [(8, 4)], seed=9)
    (b,) = cc_discover(m, CcConfig(k_biclusters=1))
    block = m.values[np.ix_(b.rows, b.cols)]
    sign = np.where(np.isin(b.rows, b.inverted_rows), -1.0, 1.0)[:, None]
    assert b.extra["msr"] == pytest.approx(oracles.msr((sign * block).tolist()), rel=1e-9)
    assert b.extra["msr"] == pytest.approx(msr_index(sign * block), rel=1e-12)


def test_config_validation():
    for kwargs in ({"msr_threshold": 0}, {"multiple_deletion_factor": 0.5}, {"mask_range": (5, 1)}, {"k_biclusters": 0}):
        with pytest.raises(ValueError):
            CcConfig(**kwargs)
