"""Clustering benchmark: Lloyd's k-means, STAR k*-means and isotropic EM,
with purity/entropy evaluation and a reproducible harness."""

from .core import (
    Assignment,
    DataError,
    DataMatrix,
    RngStream,
    load_csv,
    minmax_normalize,
    sample_distinct_rows,
    write_csv,
)
from .kmeans import CentroidModel, assign_nearest, lloyd_run, recompute_centroids
from .kstar import KStarModel, fscl_phase, fscl_winner, kstar_run, penalized_cost, penalized_phase
from .em import GmmIsoModel, e_step, em_run, hard_assign, m_step
from .metrics import (
    MetricsReport,
    class_entropy,
    cluster_means,
    intercluster_distances,
    normalized_entropy,
    purity,
)
from .bench import RunConfig, run_experiment

__version__ = "0.1.0"
