"""Lloyd's k-means: nearest-center hard assignment, mean recomputation, iterate."""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .core import Assignment, DataMatrix, DataError, RngStream, sample_distinct_rows


@dataclass
class CentroidModel:
    k: int
    centroids: np.ndarray
    counts: np.ndarray
    sse: float
    iterations: int
    sse_trace: List[float] = field(default_factory=list)


def _sq_dists(values: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (n, k) squared Euclidean distances
    diff = values[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def assign_nearest(m: DataMatrix, centroids: np.ndarray) -> Assignment:
    """Assign each row to its nearest centroid; ties go to the lowest index."""
    centroids = np.asarray(centroids, dtype=float)
    if centroids.ndim != 2 or centroids.shape[1] != m.d:
        raise DataError(
            f"centroid dimension {centroids.shape} does not match data dimension {m.d}"
        )
    idx = np.argmin(_sq_dists(m.values, centroids), axis=1)
    return Assignment(k=centroids.shape[0], index=idx)


def _recompute(m: DataMatrix, a: Assignment) -> Tuple[np.ndarray, np.ndarray]:
    """Means per cluster; empty clusters are re-seeded with the globally
    farthest point, which is moved into the empty cluster.

    Returns (centroids, possibly-updated index).
    """
    idx = a.index.copy()
    k = a.k
    centroids = np.zeros((k, m.d))
    counts = np.bincount(idx, minlength=k)
    for j in range(k):
        if counts[j] > 0:
            centroids[j] = m.values[idx == j].mean(axis=0)
    for j in range(k):
        if counts[j] > 0:
            continue
        dists = np.linalg.norm(m.values - centroids[idx], axis=1)
        donor = int(np.argmax(dists))
        old = idx[donor]
        idx[donor] = j
        centroids[j] = m.values[donor]
        counts[j] = 1
        counts[old] -= 1
        if counts[old] > 0:
            centroids[old] = m.values[idx == old].mean(axis=0)
    return centroids, idx


def recompute_centroids(m: DataMatrix, a: Assignment) -> np.ndarray:
    """Arithmetic mean of each cluster's members, with empty-cluster re-seeding."""
    centroids, _ = _recompute(m, a)
    return centroids


def _sse(values: np.ndarray, centroids: np.ndarray, idx: np.ndarray) -> float:
    diff = values - centroids[idx]
    return float(np.sum(diff * diff))


def lloyd_run(
    m: DataMatrix,
    k: int,
    rng: RngStream,
    max_iters: int = 300,
    tol: float = 1e-8,
) -> Tuple[CentroidModel, Assignment]:
    """Run Lloyd's algorithm from a random k-distinct-rows initialization.

    Stops when the assignment is unchanged, when the largest centroid
    displacement drops to tol, or at max_iters.
    """
    if not (1 <= k <= m.n):
        raise DataError(f"k must be in [1, {m.n}], got {k}")
    if max_iters < 1:
        raise DataError("max_iters must be >= 1")
    if tol < 0:
        raise DataError("tol must be >= 0")

    centroids = sample_distinct_rows(m, k, rng)
    trace: List[float] = []
    prev_idx = None
    iterations = 0
    idx = np.zeros(m.n, dtype=int)
    for _ in range(max_iters):
        iterations += 1
        a = assign_nearest(m, centroids)
        new_centroids, idx = _recompute(m, a)
        trace.append(_sse(m.values, new_centroids, idx))
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if prev_idx is not None and np.array_equal(idx, prev_idx):
            break
        if shift <= tol:
            break
        prev_idx = idx
    assignment = Assignment(k=k, index=idx)
    model = CentroidModel(
        k=k,
        centroids=centroids,
        counts=assignment.sizes(),
        sse=trace[-1],
        iterations=iterations,
        sse_trace=trace,
    )
    return model, assignment
