"""Expectation-maximization for an isotropic Gaussian mixture.

The mixture has k means, one shared variance sigma2 fixed for the whole
run, and uniform 1/k component weights. Two M-step variants exist: the
standard responsibility-normalized mean, and a literal variant that
divides by the point count instead (kept for fidelity experiments; it
shrinks means and breaks likelihood ascent).
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy.special import logsumexp

from .core import Assignment, DataMatrix, DataError, RngStream, sample_distinct_rows

STARVED_EPS = 1e-12


@dataclass
class GmmIsoModel:
    k: int
    means: np.ndarray            # (k, d)
    sigma2: float
    responsibilities: np.ndarray  # (n, k)
    iterations: int
    loglik_trace: List[float] = field(default_factory=list)


def _sq_dists(values: np.ndarray, means: np.ndarray) -> np.ndarray:
    diff = values[:, None, :] - means[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def e_step(m: DataMatrix, means: np.ndarray, sigma2: float) -> np.ndarray:
    """Posterior responsibilities under shared-variance isotropic Gaussians.

    Computed with max-subtraction in the exponent so tiny sigma2 is safe.
    """
    if sigma2 <= 0:
        raise DataError("sigma2 must be > 0")
    means = np.asarray(means, dtype=float)
    log_w = -_sq_dists(m.values, means) / (2.0 * sigma2)
    log_w -= log_w.max(axis=1, keepdims=True)
    w = np.exp(log_w)
    return w / w.sum(axis=1, keepdims=True)


def m_step(
    m: DataMatrix,
    resp: np.ndarray,
    variant: str = "standard",
    prev_means: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Update means from responsibilities.

    standard: weighted average, mu_j = sum_i r_ij x_i / sum_i r_ij; a fully
    starved component keeps its previous mean. paper_literal: divides by the
    point count n regardless of the responsibility mass.
    """
    resp = np.asarray(resp, dtype=float)
    weighted = resp.T @ m.values  # (k, d)
    if variant == "paper_literal":
        return weighted / m.n
    if variant != "standard":
        raise DataError(f"unknown M-step variant {variant!r}")
    mass = resp.sum(axis=0)
    means = np.empty_like(weighted)
    for j in range(resp.shape[1]):
        if mass[j] < STARVED_EPS:
            if prev_means is None:
                raise DataError(f"component {j} is starved and no previous mean given")
            means[j] = prev_means[j]
        else:
            means[j] = weighted[j] / mass[j]
    return means


def log_likelihood(m: DataMatrix, means: np.ndarray, sigma2: float) -> float:
    """Sum over points of log of the uniform-weight mixture density."""
    d = m.d
    log_norm = -0.5 * d * math.log(2.0 * math.pi * sigma2)
    log_pdf = log_norm - _sq_dists(m.values, means) / (2.0 * sigma2)
    return float(np.sum(logsumexp(log_pdf - math.log(means.shape[0]), axis=1)))


def em_run(
    m: DataMatrix,
    k: int,
    rng: RngStream,
    sigma2_mode: Union[str, float] = "data_variance",
    variant: str = "standard",
    max_iters: int = 300,
    tol: float = 1e-8,
) -> GmmIsoModel:
    """Alternate E and M steps from a k-distinct-rows initialization.

    sigma2 stays fixed for the run: either an explicit value, or
    "data_variance" = the mean of the per-column variances.
    """
    if not (1 <= k <= m.n):
        raise DataError(f"k must be in [1, {m.n}], got {k}")
    if sigma2_mode == "data_variance":
        sigma2 = float(np.mean(np.var(m.values, axis=0)))
        if sigma2 <= 0:
            sigma2 = 1e-12
    else:
        sigma2 = float(sigma2_mode)
        if sigma2 <= 0:
            raise DataError("sigma2 must be > 0")

    means = sample_distinct_rows(m, k, rng)
    trace: List[float] = []
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        trace.append(log_likelihood(m, means, sigma2))
        resp = e_step(m, means, sigma2)
        new_means = m_step(m, resp, variant=variant, prev_means=means)
        shift = float(np.max(np.linalg.norm(new_means - means, axis=1)))
        means = new_means
        if shift <= tol:
            break
    return GmmIsoModel(
        k=k,
        means=means,
        sigma2=sigma2,
        responsibilities=e_step(m, means, sigma2),
        iterations=iterations,
        loglik_trace=trace,
    )


def hard_assign(model: GmmIsoModel) -> Assignment:
    """Most-responsible component per point; ties go to the lowest index."""
    return Assignment(k=model.k, index=np.argmax(model.responsibilities, axis=1))
