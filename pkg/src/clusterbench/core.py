"""Dataset loading, min-max normalization and the seeded RNG contract.

All algorithms in this package draw their randomness through RngStream so
that a (seed, stream_id) pair reproduces the same run on any platform.
"""

import csv
import os
from dataclasses import dataclass
from typing import Optional, List

import numpy as np


class DataError(ValueError):
    """Raised for malformed input data, with row/column positions where known."""


@dataclass(frozen=True)
class RngStream:
    """A value-type handle on a deterministic random stream.

    Same (seed, stream_id) always yields the same draws; distinct stream_ids
    give independent streams from one seed.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class DataMatrix:
    """An n x d feature table with optional 0-based class labels per row."""

    values: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: Optional[List[str]] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise DataError("values must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(v)):
            raise DataError("values contain NaN or Inf")
        object.__setattr__(self, "values", v)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=int)
            if lab.shape != (v.shape[0],):
                raise DataError(
                    f"labels length {lab.shape} does not match row count {v.shape[0]}"
                )
            if lab.min() < 0:
                raise DataError("labels must be non-negative")
            object.__setattr__(self, "labels", lab)
        if self.feature_names is not None and len(self.feature_names) != v.shape[1]:
            raise DataError("feature_names length does not match column count")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def num_classes(self) -> int:
        if self.labels is None:
            return 0
        return int(self.labels.max()) + 1


@dataclass(frozen=True)
class Assignment:
    """Hard cluster index per row, entries in [0, k)."""

    k: int
    index: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.index, dtype=int)
        if self.k < 1:
            raise DataError("k must be >= 1")
        if idx.ndim != 1 or idx.size < 1:
            raise DataError("index must be a non-empty 1-D array")
        if idx.min() < 0 or idx.max() >= self.k:
            raise DataError(f"cluster indices must lie in [0, {self.k})")
        object.__setattr__(self, "index", idx)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.index, minlength=self.k)


def _try_float(cell: str) -> Optional[float]:
    try:
        return float(cell)
    except ValueError:
        return None


def load_csv(path, class_col: Optional[int] = None, has_header: str = "auto") -> DataMatrix:
    """Load a comma-separated numeric table, optionally splitting off a class column.

    has_header is "auto", "yes" or "no"; in auto mode a first row containing
    any non-numeric cell is treated as a header.
    """
    if has_header not in ("auto", "yes", "no"):
        raise DataError(f"has_header must be auto|yes|no, got {has_header!r}")
    if not os.path.exists(path):
        raise DataError(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError("no data rows")

    header = None
    if has_header == "yes":
        header = rows[0]
        rows = rows[1:]
    elif has_header == "auto":
        if any(_try_float(c) is None for c in rows[0]):
            header = rows[0]
            rows = rows[1:]
    if not rows:
        raise DataError("no data rows")

    ncols = len(rows[0])
    if class_col is not None and not (0 <= class_col < ncols):
        raise DataError(f"class_col {class_col} out of range for {ncols} columns")

    values = []
    raw_labels = []
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise DataError(f"row {i}: expected {ncols} columns, got {len(row)}")
        feat = []
        for j, cell in enumerate(row):
            x = _try_float(cell)
            if x is None:
                raise DataError(f"row {i}, column {j}: non-numeric cell {cell.strip()!r}")
            if class_col is not None and j == class_col:
                raw_labels.append(x)
            else:
                feat.append(x)
        if not all(np.isfinite(feat)):
            j = int(np.argwhere(~np.isfinite(feat))[0][0])
            raise DataError(f"row {i}, column {j}: non-finite value")
        values.append(feat)

    labels = None
    if class_col is not None:
        distinct = sorted(set(raw_labels))
        code = {v: i for i, v in enumerate(distinct)}
        labels = np.array([code[v] for v in raw_labels], dtype=int)

    names = None
    if header is not None:
        names = [h for j, h in enumerate(header) if class_col is None or j != class_col]
    return DataMatrix(values=np.array(values, dtype=float), labels=labels, feature_names=names)


def write_csv(m: DataMatrix, path) -> None:
    """Write a DataMatrix back out; 17 significant digits keep round trips lossless."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if m.feature_names is not None:
            hdr = list(m.feature_names)
            if m.labels is not None:
                hdr.append("class")
            w.writerow(hdr)
        for i in range(m.n):
            row = ["%.17g" % x for x in m.values[i]]
            if m.labels is not None:
                row.append(str(int(m.labels[i])))
            w.writerow(row)


def minmax_normalize(m: DataMatrix) -> DataMatrix:
    """Scale every column into [0, 1] by (x - min) / (max - min).

    A constant column maps to all zeros; labels pass through untouched.
    """
    lo = m.values.min(axis=0)
    hi = m.values.max(axis=0)
    span = hi - lo
    out = np.zeros_like(m.values)
    nz = span > 0
    out[:, nz] = (m.values[:, nz] - lo[nz]) / span[nz]
    return DataMatrix(values=out, labels=m.labels, feature_names=m.feature_names)


def sample_distinct_rows(m: DataMatrix, k: int, rng: RngStream) -> np.ndarray:
    """Pick k distinct rows of m, uniformly without replacement."""
    if k < 1:
        raise DataError("k must be >= 1")
    if k > m.n:
        raise DataError(f"cannot sample {k} distinct rows from {m.n}")
    idx = rng.generator().choice(m.n, size=k, replace=False)
    return m.values[idx].copy()
