import numpy as np
import pytest

from kernel_align.exceptions import ArgumentError, PreconditionError
from kernel_align.kernel.service import (
    alignment_cost,
    alignment_score,
    gaussian_cross_gram,
    gaussian_gram,
    kernel_pair,
    pairwise_rbf,
    target_kernel,
)
from kernel_align.kernel.views import KernelPair
from kernel_align.layer_trainer.views import LayerParams
from kernel_align.preprocess.views import FeatureMatrix


def test_target_kernel_examples():
    assert target_kernel(np.array([0, 1, 0])).tolist() == [[1, 0, 1], [0, 1, 0], [1, 0, 1]]
    assert target_kernel(np.array([2, 2])).tolist() == [[1, 1], [1, 1]]
    assert target_kernel(np.array([5])).tolist() == [[1]]


def test_target_kernel_ignores_label_names():
    labels = np.array([3, 1, 3, 0, 1])
    renamed = np.array([7, 2, 7, 9, 2])
    assert np.array_equal(target_kernel(labels), target_kernel(renamed))


def test_target_kernel_rejects_empty():
    with pytest.raises(ArgumentError):
        target_kernel(np.array([], dtype=int))


def test_gaussian_gram_examples():
    orthogonal = FeatureMatrix(rows=[[1.0, 0.0], [0.0, 1.0]], normalized=True)
    np.testing.assert_allclose(gaussian_gram(orthogonal, 1.0), [[1.0, np.exp(-1)], [np.exp(-1), 1.0]], atol=1e-15)

    opposite = FeatureMatrix(rows=[[1.0, 0.0], [-1.0, 0.0]], normalized=True)
    assert gaussian_gram(opposite, 1.0)[0, 1] == pytest.approx(np.exp(-2), abs=1e-15)

    wide = gaussian_gram(orthogonal, 2.0)
    assert wide[0, 1] == pytest.approx(np.exp(-0.25), abs=1e-15)


def test_gaussian_gram_errors():
    raw = FeatureMatrix(rows=[[1.0, 0.0]])
    with pytest.raises(PreconditionError):
        gaussian_gram(raw)
    with pytest.raises(ArgumentError):
        gaussian_gram(FeatureMatrix(rows=[[1.0, 0.0]], normalized=True), sigma=0.0)


def test_gaussian_gram_invariants(normalized_features):
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        n, d = int(rng.integers(1, 30)), int(rng.integers(2, 20))
        sigma = float(rng.uniform(0.3, 3.0))
        x = normalized_features(n, d, seed)
        K = gaussian_gram(x, sigma)

        assert K.shape == (n, n)
        assert np.array_equal(K, K.T)
        np.testing.assert_allclose(np.diag(K), 1.0, atol=1e-12)
        assert np.all(K > 0) and np.all(K <= 1.0)
        eigenvalues = np.linalg.eigvalsh(K)
        assert eigenvalues.min() >= -1e-8 * eigenvalues.max()
        # for unit-norm rows ||xi - xj||^2 = 2 - 2 <xi, xj>
        np.testing.assert_allclose(K, pairwise_rbf(x.rows, sigma), atol=1e-12)


def test_gaussian_cross_gram_matches_gram(normalized_features):
    x = normalized_features(10, 6, seed=4)
    np.testing.assert_allclose(gaussian_cross_gram(x, x, 0.8), gaussian_gram(x, 0.8), atol=1e-15)
    with pytest.raises(ArgumentError):
        gaussian_cross_gram(normalized_features(3, 5, seed=1), x)


def test_alignment_cost_examples():
    K = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert alignment_cost(KernelPair(K=K, T=K.copy()), np.zeros((3, 2)), lam=0.1) == 0.0
    assert alignment_cost(KernelPair(K=K, T=np.ones((2, 2))), np.zeros((3, 2)), lam=0.0) == pytest.approx(0.5)
    assert alignment_cost(KernelPair(K=K, T=K.copy()), LayerParams(W=np.ones((2, 2))), lam=0.25) == pytest.approx(1.0)


def test_alignment_cost_matches_brute_force(normalized_features):
    rng = np.random.default_rng(3)
    labels = rng.integers(0, 4, size=15)
    kp = kernel_pair(normalized_features(15, 7, seed=3), labels, sigma=1.3)
    w = rng.standard_normal((8, 5))
    expected = 0.0
    for i in range(15):
        for j in range(15):
            expected += (kp.K[i, j] - kp.T[i, j]) ** 2
    expected = expected / 15**2 + 0.01 * sum(v * v for v in w.ravel())
    assert alignment_cost(kp, w, lam=0.01) == pytest.approx(expected, rel=1e-12)


def test_alignment_cost_rejects_negative_lambda():
    K = np.eye(2)
    with pytest.raises(ArgumentError):
        alignment_cost(KernelPair(K=K, T=K), np.zeros((2, 2)), lam=-1.0)


def test_kernel_pair_shape_checks():
    with pytest.raises(ArgumentError):
        KernelPair(K=np.eye(2), T=np.eye(3))
    with pytest.raises(ArgumentError):
        KernelPair(K=np.ones((2, 3)), T=np.ones((2, 3)))


def test_alignment_score_bounds():
    T = target_kernel(np.array([0, 0, 1]))
    assert alignment_score(T, T) == pytest.approx(1.0)
    assert alignment_score(np.eye(3), T) == pytest.approx(3 / (np.sqrt(3) * np.sqrt(5)))
    assert alignment_score(np.zeros((3, 3)), T) == 0.0


def test_alignment_term_is_bounded(normalized_features):
    rng = np.random.default_rng(12)
    kp = kernel_pair(normalized_features(25, 6, seed=12), rng.integers(0, 5, size=25), sigma=0.5)
    cost = alignment_cost(kp, np.zeros((1, 1)), lam=0.0)
    assert 0.0 <= cost <= 1.0
