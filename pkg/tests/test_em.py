import numpy as np
import pytest

from clusterbench.core import DataError, DataMatrix, RngStream
from clusterbench.em import e_step, em_run, hard_assign, log_likelihood, m_step
from clusterbench.kmeans import assign_nearest, recompute_centroids
from clusterbench.core import Assignment

from conftest import make_gauss3


def dm(rows):
    return DataMatrix(values=np.asarray(rows, dtype=float))


class TestEStep:
    def test_equidistant_point_splits_evenly(self):
        r = e_step(dm([[5.0]]), np.array([[0.0], [10.0]]), sigma2=1.0)
        assert np.allclose(r, [[0.5, 0.5]])

    def test_dominated_exponent(self):
        r = e_step(dm([[0.0]]), np.array([[0.0], [100.0]]), sigma2=0.01)
        assert r[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert r[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_k1_exact_ones(self):
        r = e_step(dm([[1.0], [2.0]]), np.array([[0.0]]), sigma2=1.0)
        assert np.array_equal(r, np.ones((2, 1)))

    def test_rows_normalized(self):
        gen = np.random.default_rng(0)
        m = DataMatrix(values=gen.normal(size=(50, 3)))
        r = e_step(m, gen.normal(size=(4, 3)), sigma2=0.5)
        assert np.allclose(r.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(r >= 0)

    def test_rejects_bad_sigma2(self):
        with pytest.raises(DataError):
            e_step(dm([[0.0]]), np.array([[0.0]]), sigma2=0.0)


class TestMStep:
    def test_uniform_responsibilities_give_grand_mean(self):
        m = dm([[0.0, 0.0], [2.0, 4.0], [4.0, 8.0]])
        resp = np.full((3, 2), 0.5)
        means = m_step(m, resp)
        assert np.allclose(means, [[2.0, 4.0], [2.0, 4.0]])

    def test_hard_responsibilities_match_kmeans_update(self):
        m = dm([[0.0], [1.0], [9.0], [10.0]])
        idx = np.array([0, 0, 1, 1])
        resp = np.eye(2)[idx]
        means = m_step(m, resp)
        expect = recompute_centroids(m, Assignment(k=2, index=idx))
        assert np.allclose(means, expect)

    def test_k1_variants_coincide(self):
        m = dm([[1.0], [3.0], [5.0]])
        resp = np.ones((3, 1))
        assert np.allclose(m_step(m, resp, "standard"), m_step(m, resp, "paper_literal"))

    def test_variants_differ_on_nonuniform_mass(self):
        m = dm([[0.0], [1.0], [2.0], [3.0]])
        resp = np.array([[0.9, 0.1], [0.8, 0.2], [0.2, 0.8], [0.1, 0.9]])
        std = m_step(m, resp, "standard")
        lit = m_step(m, resp, "paper_literal")
        assert np.max(np.abs(std - lit)) > 1e-6

    def test_starved_component_keeps_previous_mean(self):
        m = dm([[0.0], [1.0]])
        resp = np.array([[1.0, 0.0], [1.0, 0.0]])
        prev = np.array([[5.0], [7.0]])
        means = m_step(m, resp, prev_means=prev)
        assert means[1, 0] == 7.0


class TestEmRun:
    def test_1d_two_cluster_fixed_point(self):
        m = dm([[0.0], [0.1], [9.9], [10.0]])
        for s in range(6):
            model = em_run(m, 2, RngStream(s, 0), sigma2_mode=0.25, tol=1e-12, max_iters=500)
            assert np.allclose(np.sort(model.means.ravel()), [0.05, 9.95], atol=1e-6)

    def test_k1_converges_immediately_to_grand_mean(self):
        m = dm([[0.0], [4.0], [8.0]])
        model = em_run(m, 1, RngStream(0, 0))
        assert model.means.ravel().tolist() == [4.0]

    def test_infinite_tol_single_iteration(self):
        m = dm([[0.0], [1.0]])
        model = em_run(m, 2, RngStream(0, 0), sigma2_mode=1.0, tol=np.inf)
        assert model.iterations == 1
        assert len(model.loglik_trace) == 1

    def test_loglik_non_decreasing(self):
        for seed in range(10):
            m = make_gauss3(seed)
            model = em_run(m, 3, RngStream(seed, 0), sigma2_mode=0.25)
            t = model.loglik_trace
            assert all(t[i + 1] >= t[i] - 1e-9 for i in range(len(t) - 1))

    def test_responsibility_rows_sum_to_one(self, gauss3):
        model = em_run(gauss3, 4, RngStream(1, 0))
        assert np.allclose(model.responsibilities.sum(axis=1), 1.0, atol=1e-12)

    def test_tiny_sigma_reduces_to_nearest(self, gauss3):
        model = em_run(gauss3, 3, RngStream(2, 0), sigma2_mode=1e-12, max_iters=5)
        assert np.array_equal(
            hard_assign(model).index,
            assign_nearest(gauss3, model.means).index,
        )

    def test_rejects_bad_k(self):
        m = dm([[0.0]])
        with pytest.raises(DataError):
            em_run(m, 2, RngStream(0, 0))


class TestHardAssign:
    def make(self, resp):
        resp = np.asarray(resp, dtype=float)
        return hard_assign(
            type("M", (), {"k": resp.shape[1], "responsibilities": resp})()
        )

    def test_tie_to_lowest(self):
        assert self.make([[0.5, 0.5]]).index.tolist() == [0]

    def test_argmax(self):
        assert self.make([[0.1, 0.9]]).index.tolist() == [1]

    def test_k1(self):
        assert self.make([[1.0], [1.0]]).index.tolist() == [0, 0]


def test_log_likelihood_matches_direct_sum():
    gen = np.random.default_rng(3)
    m = DataMatrix(values=gen.normal(size=(10, 2)))
    means = gen.normal(size=(3, 2))
    s2 = 0.7
    direct = 0.0
    for x in m.values:
        p = 0.0
        for mu in means:
            d2 = float(np.sum((x - mu) ** 2))
            p += (1 / 3) * np.exp(-d2 / (2 * s2)) / (2 * np.pi * s2)
        direct += np.log(p)
    assert log_likelihood(m, means, s2) == pytest.approx(direct, rel=1e-12)
