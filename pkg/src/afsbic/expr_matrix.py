"""Expression matrices, bicluster index sets and dataset loaders."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

PLAIN = "plain-numeric"
LABELED = "labeled-delimited"
FORMATS = (PLAIN, LABELED)


class MatrixFormatError(ValueError):
    """Raised when a matrix file cannot be parsed into a valid matrix."""


@dataclass(frozen=True)
class MissingPolicy:
    """Which value marks a missing entry and how to seed its replacement."""

    sentinel: Optional[float] = None
    seed: int = 0


@dataclass(frozen=True, eq=False)
class ExpressionMatrix:
    """Immutable N x M gene-by-condition matrix with axis labels."""

    values: np.ndarray
    gene_labels: tuple[str, ...] = ()
    condition_labels: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {values.shape}")
        n, m = values.shape
        if n < 1 or m < 1:
            raise ValueError(f"matrix must be non-empty, got {n}x{m}")
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix contains non-finite entries")
        values.setflags(write=False)
        genes = tuple(self.gene_labels) or tuple(f"G{i}" for i in range(n))
        conds = tuple(self.condition_labels) or tuple(f"C{j}" for j in range(m))
        if len(genes) != n or len(conds) != m:
            raise ValueError("label counts do not match matrix shape")
        if len(set(genes)) != n or len(set(conds)) != m:
            raise ValueError("labels must be unique within an axis")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "gene_labels", genes)
        object.__setattr__(self, "condition_labels", conds)

    @property
    def n_genes(self) -> int:
        return self.values.shape[0]

    @property
    def n_conditions(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, ExpressionMatrix):
            return NotImplemented
        return (
            self.gene_labels == other.gene_labels
            and self.condition_labels == other.condition_labels
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def scaled(self, factor: float) -> "ExpressionMatrix":
        return ExpressionMatrix(self.values * factor, self.gene_labels, self.condition_labels)


@dataclass(frozen=True)
class BiclusterIndex:
    """Sorted, duplicate-free row and column index sets of a submatrix."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(i) for i in self.rows)
        cols = tuple(int(j) for j in self.cols)
        for name, idx in (("rows", rows), ("cols", cols)):
            if not idx:
                raise ValueError(f"bicluster {name} must be non-empty")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"bicluster {name} must be strictly increasing")
            if idx[0] < 0:
                raise ValueError(f"negative index in bicluster {name}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_sets(cls, rows, cols) -> "BiclusterIndex":
        return cls(tuple(sorted(set(int(i) for i in rows))), tuple(sorted(set(int(j) for j in cols))))

    @classmethod
    def full(cls, n: int, m: int) -> "BiclusterIndex":
        return cls(tuple(range(n)), tuple(range(m)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def n_cells(self) -> int:
        return len(self.rows) * len(self.cols)

    def is_reportable(self) -> bool:
        """True when the bicluster has at least two rows and two columns."""
        return len(self.rows) >= 2 and len(self.cols) >= 2

    def check_bounds(self, n: int, m: int) -> None:
        if self.rows[-1] >= n or self.cols[-1] >= m:
            raise IndexError(f"bicluster index out of range for a {n}x{m} matrix")

    def compose(self, inner: "BiclusterIndex") -> "BiclusterIndex":
        """Map an index expressed in positions of this submatrix back to the parent."""
        inner.check_bounds(len(self.rows), len(self.cols))
        return BiclusterIndex(
            tuple(self.rows[i] for i in inner.rows), tuple(self.cols[j] for j in inner.cols)
        )

    def jaccard(self, other: "BiclusterIndex") -> float:
        """Cell-level Jaccard overlap of two biclusters."""
        shared = len(set(self.rows) & set(other.rows)) * len(set(self.cols) & set(other.cols))
        union = self.n_cells + other.n_cells - shared
        return shared / union


def submatrix(m: ExpressionMatrix, idx: BiclusterIndex) -> ExpressionMatrix:
    idx.check_bounds(*m.shape)
    rows, cols = list(idx.rows), list(idx.cols)
    return ExpressionMatrix(
        m.values[np.ix_(rows, cols)],
        tuple(m.gene_labels[i] for i in rows),
        tuple(m.condition_labels[j] for j in cols),
    )


def submatrix_values(m: ExpressionMatrix | np.ndarray, idx: BiclusterIndex) -> np.ndarray:
    """Raw |I| x |J| array view of a bicluster, without relabelling."""
    values = m.values if isinstance(m, ExpressionMatrix) else np.asarray(m, dtype=np.float64)
    idx.check_bounds(*values.shape)
    return values[np.ix_(list(idx.rows), list(idx.cols))]


def _parse_float(token: str, where: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise MatrixFormatError(f"non-numeric token {token!r} at {where}") from None


def _read_plain(path: Path) -> tuple[np.ndarray, tuple, tuple]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            tokens = line.split()
            if not tokens:
                continue
            rows.append([_parse_float(t, f"line {lineno}") for t in tokens])
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise MatrixFormatError(f"ragged rows: found widths {sorted(widths)}")
    return np.array(rows, dtype=np.float64).reshape(len(rows), -1), (), ()


def _read_labeled(path: Path) -> tuple[np.ndarray, tuple, tuple]:
    with open(path, newline="") as fh:
        text = fh.read()
    first = text.split("\n", 1)[0]
    delimiter = "\t" if "\t" in first else ","
    records = [r for r in csv.reader(text.splitlines(), delimiter=delimiter) if r]
    if not records:
        raise MatrixFormatError("empty file")
    header, body = records[0], records[1:]
    conditions = tuple(h.strip() for h in header[1:])
    genes, rows = [], []
    for lineno, rec in enumerate(body, 2):
        if len(rec) != len(header):
            raise MatrixFormatError(
                f"ragged rows: line {lineno} has {len(rec)} fields, header has {len(header)}"
            )
        genes.append(rec[0].strip())
        rows.append([_parse_float(t.strip(), f"line {lineno}") for t in rec[1:]])
    values = np.array(rows, dtype=np.float64).reshape(len(rows), len(conditions))
    return values, tuple(genes), conditions


def impute_missing(values: np.ndarray, policy: MissingPolicy) -> np.ndarray:
    """Replace sentinel entries with uniform draws from the column's observed range."""
    values = np.array(values, dtype=np.float64, copy=True)
    if policy.sentinel is None:
        return values
    missing = values == policy.sentinel
    if not missing.any():
        return values
    rng = np.random.default_rng(policy.seed)
    for j in range(values.shape[1]):
        hole = missing[:, j]
        if not hole.any():
            continue
        observed = values[~hole, j]
        if observed.size == 0:
            raise MatrixFormatError(f"column {j} is entirely missing")
        values[hole, j] = rng.uniform(observed.min(), observed.max(), size=int(hole.sum()))
    return values


def load_matrix(
    path: str | Path, format: str = PLAIN, policy: MissingPolicy | None = None
) -> ExpressionMatrix:
    """Load a plain whitespace matrix (Yeast layout) or a labeled CSV/TSV.

    Missing entries equal to ``policy.sentinel`` are replaced by seeded uniform
    draws from the observed range of their column.
    """
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    reader = _read_plain if format == PLAIN else _read_labeled
    values, genes, conditions = reader(path)
    if values.shape[0] < 2 or values.shape[1] < 2:
        raise MatrixFormatError(f"matrix must be at least 2x2, got {values.shape[0]}x{values.shape[1]}")
    values = impute_missing(values, policy or MissingPolicy())
    try:
        return ExpressionMatrix(values, genes, conditions)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None


def write_matrix(m: ExpressionMatrix, path: str | Path, delimiter: str = ",") -> None:
    """Write a labeled-delimited file that :func:`load_matrix` reads back exactly."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(["gene", *m.condition_labels])
        for label, row in zip(m.gene_labels, m.values):
            writer.writerow([label, *(repr(float(v)) for v in row)])


def write_plain(values: np.ndarray | Sequence[Sequence[float]], path: str | Path) -> None:
    with open(path, "w") as fh:
        for row in np.asarray(values):
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
