import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afsbic.expr_matrix import (
    LABELED,
    PLAIN,
    BiclusterIndex,
    ExpressionMatrix,
    MatrixFormatError,
    MissingPolicy,
    load_matrix,
    submatrix,
    write_matrix,
    write_plain,
)


def test_labeled_csv_is_read_verbatim(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("gene,c1,c2,c3\ng1,1.5,2,3\ng2,4,5.25,6\ng3,7,8,-9.125\n")
    m = load_matrix(path, LABELED)
    assert m.shape == (3, 3)
    assert m.gene_labels == ("g1", "g2", "g3")
    assert m.condition_labels == ("c1", "c2", "c3")
    np.testing.assert_array_equal(m.values, [[1.5, 2, 3], [4, 5.25, 6], [7, 8, -9.125]])


def test_tab_separated_is_detected(tmp_path):
    path = tmp_path / "m.tsv"
    path.write_text("id\ta\tb\nx\t1\t2\ny\t3\t4\n")
    m = load_matrix(path, LABELED)
    np.testing.assert_array_equal(m.values, [[1, 2], [3, 4]])
    assert m.condition_labels == ("a", "b")


def test_plain_numeric_synthesizes_labels(tmp_path):
    path = tmp_path / "yeast.matrix"
    path.write_text("1 2 3\n4 5 6\n\n")
    m = load_matrix(path, PLAIN)
    assert m.gene_labels == ("G0", "G1")
    assert m.condition_labels == ("C0", "C1", "C2")


@pytest.mark.parametrize(
    "text, fmt, match",
    [
        ("1 2 3\n4 5\n", PLAIN, "ragged"),
        ("1 2\n4 x\n", PLAIN, "non-numeric"),
        ("1 2 3\n", PLAIN, "2x2"),
        ("1\n2\n", PLAIN, "2x2"),
        ("g,a,b\nr1,1,2\nr2,3\n", LABELED, "ragged"),
        ("g,a,b\nr1,1,2\nr2,3,zz\n", LABELED, "non-numeric"),
        ("g,a,b\nr1,1,2\nr1,3,4\n", LABELED, "unique"),
    ],
)
def test_malformed_inputs_are_rejected(tmp_path, text, fmt, match):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(MatrixFormatError, match=match):
        load_matrix(path, fmt)


def test_entirely_missing_column_is_rejected(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("1 -1\n2 -1\n3 -1\n")
    with pytest.raises(MatrixFormatError, match="entirely missing"):
        load_matrix(path, PLAIN, MissingPolicy(sentinel=-1))


def test_imputation_stays_in_observed_column_range_and_is_seeded(tmp_path):
    path = tmp_path / "m.txt"
    rows = [[i, 10 * i if i % 3 else -1] for i in range(1, 30)]
    write_plain(rows, path)
    a = load_matrix(path, PLAIN, MissingPolicy(-1, seed=3))
    b = load_matrix(path, PLAIN, MissingPolicy(-1, seed=3))
    c = load_matrix(path, PLAIN, MissingPolicy(-1, seed=4))
    assert a == b
    assert not np.array_equal(a.values, c.values)
    observed = [r[1] for r in rows if r[1] != -1]
    assert (a.values[:, 1] >= min(observed)).all() and (a.values[:, 1] <= max(observed)).all()
    np.testing.assert_array_equal(a.values[:, 0], np.arange(1, 30))


def test_round_trip_through_labeled_csv(tmp_path, rng):
    m = ExpressionMatrix(rng.normal(size=(7, 4)) * 1e3, [f"g{i}" for i in range(7)], list("abcd"))
    write_matrix(m, tmp_path / "m.csv")
    assert load_matrix(tmp_path / "m.csv", LABELED) == m


def test_matrix_is_immutable():
    m = ExpressionMatrix([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        m.values[0, 0] = 5


def test_submatrix_examples():
    a = np.arange(16.0).reshape(4, 4)
    m = ExpressionMatrix(a)
    assert submatrix(m, BiclusterIndex.full(4, 4)) == m
    one = submatrix(m, BiclusterIndex((0,), (0,)))
    assert one.values.tolist() == [[0.0]]
    sub = submatrix(m, BiclusterIndex((1, 3), (0, 2)))
    assert sub.values.tolist() == [[a[1, 0], a[1, 2]], [a[3, 0], a[3, 2]]]
    assert sub.gene_labels == ("G1", "G3") and sub.condition_labels == ("C0", "C2")
    with pytest.raises(IndexError):
        submatrix(m, BiclusterIndex((0, 4), (0,)))


@pytest.mark.parametrize("rows", [(), (1, 1), (2, 1), (-1, 0)])
def test_bicluster_index_invariants(rows):
    with pytest.raises(ValueError):
        BiclusterIndex(rows, (0,))


def test_jaccard():
    a = BiclusterIndex((0, 1), (0, 1))
    b = BiclusterIndex((1, 2), (0, 1))
    assert a.jaccard(a) == 1.0
    assert a.jaccard(b) == pytest.approx(2 / 6)
    assert a.jaccard(BiclusterIndex((3,), (3,))) == 0.0


@st.composite
def nested_indices(draw):
    n = draw(st.integers(2, 9))
    m = draw(st.integers(2, 9))
    outer_rows = sorted(draw(st.sets(st.integers(0, n - 1), min_size=1)))
    outer_cols = sorted(draw(st.sets(st.integers(0, m - 1), min_size=1)))
    inner_rows = sorted(draw(st.sets(st.integers(0, len(outer_rows) - 1), min_size=1)))
    inner_cols = sorted(draw(st.sets(st.integers(0, len(outer_cols) - 1), min_size=1)))
    return n, m, BiclusterIndex(outer_rows, outer_cols), BiclusterIndex(inner_rows, inner_cols)


@settings(max_examples=60, deadline=None)
@given(nested_indices())
def test_submatrix_composes(case):
    n, m, outer, inner = case
    mat = ExpressionMatrix(np.arange(n * m, dtype=float).reshape(n, m))
    assert submatrix(submatrix(mat, outer), inner) == submatrix(mat, outer.compose(inner))
