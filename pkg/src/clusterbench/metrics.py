"""Cluster-quality metrics: purity, entropy variants, means, inter-cluster distances.

All entropies use natural logs; normalized entropy divides by log K and is
therefore base-invariant.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import Assignment, DataMatrix, DataError


@dataclass
class ClusterMeans:
    means: np.ndarray        # (k, d) per-feature means, zero rows for empty clusters
    grand_means: np.ndarray  # (k,) mean over members and features
    empty: np.ndarray        # (k,) bool flags


@dataclass
class MetricsReport:
    purity: Optional[float]
    norm_entropy: float
    class_entropy: Optional[float]
    dominant_count: Optional[int]
    cluster_sizes: np.ndarray
    cluster_means: ClusterMeans
    intercluster: np.ndarray
    wall_time_seconds: float = 0.0


def _contingency(a: Assignment, labels: np.ndarray) -> np.ndarray:
    if labels.shape[0] != a.index.shape[0]:
        raise DataError(
            f"labels length {labels.shape[0]} != assignment length {a.index.shape[0]}"
        )
    c = int(labels.max()) + 1
    table = np.zeros((a.k, c), dtype=int)
    np.add.at(table, (a.index, labels), 1)
    return table


def purity(a: Assignment, labels: np.ndarray) -> Tuple[float, int]:
    """Fraction of points belonging to the dominant class of their cluster.

    Also returns the raw dominant-member count.
    """
    table = _contingency(a, np.asarray(labels, dtype=int))
    dominant = int(table.max(axis=1).sum())
    return dominant / a.index.shape[0], dominant


def normalized_entropy(a: Assignment) -> float:
    """Shannon entropy of the cluster-size distribution over log K; K=1 -> 0."""
    if a.k == 1:
        return 0.0
    sizes = a.sizes()
    p = sizes[sizes > 0] / a.index.shape[0]
    return float(-np.sum(p * np.log(p)) / math.log(a.k)) + 0.0  # avoid -0.0


def class_entropy(a: Assignment, labels: np.ndarray) -> float:
    """Size-weighted mean of within-cluster class entropies (nats); 0 iff pure."""
    table = _contingency(a, np.asarray(labels, dtype=int))
    n = a.index.shape[0]
    total = 0.0
    for row in table:
        nj = row.sum()
        if nj == 0:
            continue
        p = row[row > 0] / nj
        total += (nj / n) * float(-np.sum(p * np.log(p)))
    return total


def cluster_means(m: DataMatrix, a: Assignment) -> ClusterMeans:
    """Per-cluster per-feature means plus a scalar grand mean per cluster."""
    if a.index.shape[0] != m.n:
        raise DataError("assignment length does not match data")
    means = np.zeros((a.k, m.d))
    grand = np.zeros(a.k)
    empty = np.zeros(a.k, dtype=bool)
    for j in range(a.k):
        members = m.values[a.index == j]
        if members.shape[0] == 0:
            empty[j] = True
            continue
        means[j] = members.mean(axis=0)
        grand[j] = float(members.mean())
    return ClusterMeans(means=means, grand_means=grand, empty=empty)


def intercluster_distances(centroids: np.ndarray) -> np.ndarray:
    """Pairwise Euclidean distances between centroids; zero diagonal, symmetric."""
    centroids = np.asarray(centroids, dtype=float)
    diff = centroids[:, None, :] - centroids[None, :, :]
    return np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))


def dominant_ones_count(m: DataMatrix, a: Assignment, labels: np.ndarray, threshold: float = 0.5) -> int:
    """Count of 1-valued cells, after thresholding, in the submatrix of rows
    that are dominant-class members of their cluster."""
    labels = np.asarray(labels, dtype=int)
    table = _contingency(a, labels)
    dominant_class = table.argmax(axis=1)
    mask = labels == dominant_class[a.index]
    return int(np.count_nonzero(m.values[mask] >= threshold))


def compute_report(
    m: DataMatrix,
    a: Assignment,
    centroids: np.ndarray,
    wall_time_seconds: float = 0.0,
) -> MetricsReport:
    """Assemble the full metric set for one algorithm's hard assignment."""
    if m.labels is not None:
        pur, dom = purity(a, m.labels)
        cls_ent = class_entropy(a, m.labels)
    else:
        pur, dom, cls_ent = None, None, None
    return MetricsReport(
        purity=pur,
        norm_entropy=normalized_entropy(a),
        class_entropy=cls_ent,
        dominant_count=dom,
        cluster_sizes=a.sizes(),
        cluster_means=cluster_means(m, a),
        intercluster=intercluster_distances(centroids),
        wall_time_seconds=wall_time_seconds,
    )
