"""Step-wise automatic rival-penalized k*-means.

Phase one allocates seed points with frequency-sensitive competitive
learning (FSCL): the winner for each point is the seed minimizing
win-frequency times distance, so busy seeds are handicapped and no seed
stays dead. Phase two runs a penalized competition whose per-seed cost
adds a Mahalanobis term, a log-determinant term and a -log(weight)
penalty; surplus seeds stop winning, their weights decay, and the number
of populated clusters falls to the data's own cluster count.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import Assignment, DataMatrix, DataError, RngStream, sample_distinct_rows

COV_REG_EPS = 1e-6


class CovarianceError(RuntimeError):
    """A cluster covariance stayed singular after regularization."""


@dataclass
class KStarModel:
    k: int
    means: np.ndarray          # (k, d) seed positions
    alphas: np.ndarray         # (k,) mixing weights, simplex
    covariances: np.ndarray    # (k, d, d) symmetric PD
    win_counts: np.ndarray     # (k,) cumulative wins, >= 1
    eta: float
    phase: str                 # fscl | penalized | converged


def _lambda(win_counts: np.ndarray) -> np.ndarray:
    return win_counts / win_counts.sum()


def fscl_winner(x: np.ndarray, model: KStarModel) -> int:
    """Frequency-weighted nearest seed: argmin_r lambda_r * ||x - m_r||."""
    lam = _lambda(model.win_counts)
    dists = np.linalg.norm(model.means - x, axis=1)
    return int(np.argmin(lam * dists))


def fscl_phase(
    m: DataMatrix,
    k: int,
    rng: RngStream,
    eta: float = 0.05,
    max_epochs: int = 100,
) -> KStarModel:
    """Seed-allocation phase: move each point's winner a step eta toward it.

    Terminates when a full epoch leaves every point's winner unchanged.
    """
    if k < 1:
        raise DataError("k must be >= 1")
    if not (0 <= eta < 1):
        raise DataError("eta must lie in [0, 1)")
    gen = rng.generator()
    model = KStarModel(
        k=k,
        means=sample_distinct_rows(m, k, rng),
        alphas=np.full(k, 1.0 / k),
        covariances=np.stack([np.eye(m.d)] * k),
        win_counts=np.ones(k),
        eta=eta,
        phase="fscl",
    )
    prev_winners: Optional[np.ndarray] = None
    for _ in range(max_epochs):
        winners = np.empty(m.n, dtype=int)
        for i in gen.permutation(m.n):
            x = m.values[i]
            w = fscl_winner(x, model)
            model.means[w] += eta * (x - model.means[w])
            model.win_counts[w] += 1
            winners[i] = w
        if prev_winners is not None and np.array_equal(winners, prev_winners):
            break
        prev_winners = winners
    return model


def _cholesky_factors(model: KStarModel) -> Tuple[np.ndarray, np.ndarray]:
    """Per-cluster inverse covariance and log-determinant, via Cholesky."""
    k, d = model.k, model.means.shape[1]
    invs = np.empty((k, d, d))
    logdets = np.empty(k)
    for j in range(k):
        try:
            chol = np.linalg.cholesky(model.covariances[j])
        except np.linalg.LinAlgError:
            raise CovarianceError(f"covariance of cluster {j} is singular")
        invs[j] = np.linalg.inv(model.covariances[j])
        logdets[j] = 2.0 * np.sum(np.log(np.diag(chol)))
    return invs, logdets


def penalized_cost(
    x: np.ndarray,
    j: int,
    model: KStarModel,
    inv: Optional[np.ndarray] = None,
    logdet: Optional[float] = None,
) -> float:
    """Cost of seed j claiming x: half-Mahalanobis + half-logdet - log(alpha)."""
    if inv is None or logdet is None:
        invs, logdets = _cholesky_factors(model)
        inv, logdet = invs[j], logdets[j]
    diff = x - model.means[j]
    maha = float(diff @ inv @ diff)
    return 0.5 * maha + 0.5 * logdet - np.log(model.alphas[j])


def _all_costs(x: np.ndarray, model: KStarModel, invs, logdets) -> np.ndarray:
    diff = model.means - x
    maha = np.einsum("kd,kde,ke->k", diff, invs, diff)
    return 0.5 * maha + 0.5 * logdets - np.log(model.alphas)


def _regularize(cov: np.ndarray) -> np.ndarray:
    d = cov.shape[0]
    cov = 0.5 * (cov + cov.T)
    scale = max(np.trace(cov) / d, 1e-12)
    return cov + COV_REG_EPS * scale * np.eye(d)


def _init_covariances(m: DataMatrix, model: KStarModel) -> np.ndarray:
    """Covariance of each seed's FSCL winners; tiny clusters fall back to
    the whole-data covariance."""
    full = _regularize(np.cov(m.values, rowvar=False).reshape(m.d, m.d))
    winners = np.array([fscl_winner(x, model) for x in m.values])
    covs = np.empty((model.k, m.d, m.d))
    for j in range(model.k):
        members = m.values[winners == j]
        if members.shape[0] >= 2:
            covs[j] = _regularize(np.cov(members, rowvar=False).reshape(m.d, m.d))
        else:
            covs[j] = full
    return covs


def _data_diameter(values: np.ndarray) -> float:
    span = values.max(axis=0) - values.min(axis=0)
    return float(np.linalg.norm(span))


def penalized_phase(
    m: DataMatrix,
    model: KStarModel,
    rng: RngStream,
    eta: float = 0.05,
    max_epochs: int = 100,
) -> Tuple[KStarModel, Assignment]:
    """Competition phase that starves surplus seeds.

    Weights start uniform, covariances from the FSCL partition; per point
    the cheapest seed wins, takes an inverse-covariance-scaled step and a
    win count, and the weights renormalize. Covariances are recomputed
    from the hard members at each epoch end.
    """
    gen = rng.generator()
    k = model.k
    model = KStarModel(
        k=k,
        means=model.means.copy(),
        alphas=np.full(k, 1.0 / k),
        covariances=_init_covariances(m, model),
        win_counts=np.ones(k),
        eta=eta,
        phase="penalized",
    )
    diameter = _data_diameter(m.values)
    step_cap = eta * diameter if diameter > 0 else np.inf
    invs, logdets = _cholesky_factors(model)
    prev_winners: Optional[np.ndarray] = None
    winners = np.zeros(m.n, dtype=int)
    for _ in range(max_epochs):
        winners = np.empty(m.n, dtype=int)
        for i in gen.permutation(m.n):
            x = m.values[i]
            w = int(np.argmin(_all_costs(x, model, invs, logdets)))
            step = eta * (invs[w] @ (x - model.means[w]))
            norm = np.linalg.norm(step)
            if norm > step_cap:
                step *= step_cap / norm
            model.means[w] += step
            model.win_counts[w] += 1
            model.alphas = model.win_counts / model.win_counts.sum()
            winners[i] = w
        for j in range(k):
            members = m.values[winners == j]
            if members.shape[0] >= 2:
                model.covariances[j] = _regularize(
                    np.cov(members, rowvar=False).reshape(m.d, m.d)
                )
        invs, logdets = _cholesky_factors(model)
        if prev_winners is not None and np.array_equal(winners, prev_winners):
            model.phase = "converged"
            break
        prev_winners = winners
    return model, Assignment(k=k, index=winners)


def kstar_run(
    m: DataMatrix,
    k: int,
    rng: RngStream,
    eta: float = 0.05,
    max_epochs: int = 100,
) -> Tuple[KStarModel, Assignment]:
    """FSCL allocation followed by the penalized competition."""
    model = fscl_phase(m, k, rng, eta=eta, max_epochs=max_epochs)
    pen_rng = RngStream(seed=rng.seed, stream_id=rng.stream_id + (1 << 32))
    return penalized_phase(m, model, pen_rng, eta=eta, max_epochs=max_epochs)


def surviving_count(a: Assignment) -> int:
    """Number of clusters that still own at least one point."""
    return int(np.count_nonzero(a.sizes()))


def mean_penalized_cost(m: DataMatrix, model: KStarModel, a: Assignment) -> float:
    """Average winner cost over the dataset; used to rank restarts."""
    invs, logdets = _cholesky_factors(model)
    total = 0.0
    for i in range(m.n):
        total += _all_costs(m.values[i], model, invs, logdets)[a.index[i]]
    return total / m.n
