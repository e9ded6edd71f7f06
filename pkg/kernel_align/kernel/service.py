from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from scipy.spatial.distance import cdist

from kernel_align.exceptions import ArgumentError, PreconditionError
from kernel_align.kernel.views import DEFAULT_SIGMA, KernelPair
from kernel_align.preprocess.views import FeatureMatrix

if TYPE_CHECKING:
	from kernel_align.layer_trainer.views import LayerParams


def _check_sigma(sigma: float) -> None:
	if not sigma > 0:
		raise ArgumentError(f'sigma must be positive, got {sigma}')


def target_kernel(labels: np.ndarray) -> np.ndarray:
	"""T(i, j) = 1 where labels agree, else 0."""
	labels = np.asarray(labels)
	if labels.size == 0:
		raise ArgumentError('target_kernel needs at least one label')
	return (labels[:, None] == labels[None, :]).astype(np.float64)


def cosine_to_gaussian(gram: np.ndarray, sigma: float) -> np.ndarray:
	"""exp((G - 1) / sigma^2): the RBF kernel for unit-norm rows given their inner products."""
	return np.exp((gram - 1.0) / sigma**2)


def gaussian_gram(x: FeatureMatrix, sigma: float = DEFAULT_SIGMA) -> np.ndarray:
	_check_sigma(sigma)
	if not x.normalized:
		raise PreconditionError('gaussian_gram needs row-normalized features (apply normalize_rows first)')
	# rows are samples: the n×n sample Gram, not the p×p feature Gram
	gram = np.minimum(x.rows @ x.rows.T, 1.0)
	return cosine_to_gaussian(gram, sigma)


def gaussian_cross_gram(x_test: FeatureMatrix, x_train: FeatureMatrix, sigma: float = DEFAULT_SIGMA) -> np.ndarray:
	"""m×n kernel between normalized test rows and normalized training rows."""
	_check_sigma(sigma)
	if not (x_test.normalized and x_train.normalized):
		raise PreconditionError('gaussian_cross_gram needs row-normalized features on both sides')
	if x_test.d != x_train.d:
		raise ArgumentError(f'test rows have {x_test.d} columns, training rows {x_train.d}')
	return cosine_to_gaussian(np.minimum(x_test.rows @ x_train.rows.T, 1.0), sigma)


def pairwise_rbf(x: np.ndarray, sigma: float = DEFAULT_SIGMA) -> np.ndarray:
	"""exp(-||xi - xj||^2 / (2 sigma^2)) computed from explicit pairwise distances."""
	_check_sigma(sigma)
	x = np.asarray(x, dtype=np.float64)
	return np.exp(-cdist(x, x, 'sqeuclidean') / (2.0 * sigma**2))


def alignment_cost(kp: KernelPair, w: LayerParams | np.ndarray, lam: float) -> float:
	"""(1/n^2) ||K - T||_F^2 + lam * ||W||^2, bias row included in the regularizer."""
	if lam < 0:
		raise ArgumentError(f'lambda must be non-negative, got {lam}')
	weights = getattr(w, 'W', w)
	residual = kp.K - kp.T
	return float(np.sum(residual * residual) / kp.n**2 + lam * np.sum(weights * weights))


def alignment_score(K: np.ndarray, T: np.ndarray) -> float:
	"""Normalized alignment <K, T>_F / (||K||_F ||T||_F), in [0, 1] for non-negative kernels."""
	if K.shape != T.shape:
		raise ArgumentError(f'K has shape {K.shape} but T has shape {T.shape}')
	denominator = np.linalg.norm(K) * np.linalg.norm(T)
	if denominator == 0:
		return 0.0
	return float(np.sum(K * T) / denominator)


def kernel_pair(x: FeatureMatrix, labels: np.ndarray, sigma: float = DEFAULT_SIGMA) -> KernelPair:
	return KernelPair(K=gaussian_gram(x, sigma), T=target_kernel(labels), sigma=sigma)
