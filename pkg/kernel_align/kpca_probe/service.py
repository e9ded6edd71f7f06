import csv
import io
import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize
from scipy.special import logsumexp, softmax

from kernel_align.exceptions import ArgumentError, DegenerateProblemError, PreconditionError
from kernel_align.kernel.service import gaussian_cross_gram, gaussian_gram
from kernel_align.kpca_probe.views import EIGENVALUE_FLOOR, EigenBasis, ErrorCurve, ProbeConfig, Projection, SoftmaxModel
from kernel_align.preprocess.views import FeatureMatrix
from kernel_align.utils import atomic_write_text, time_execution_sync

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-10


def eigendecompose(K: np.ndarray) -> EigenBasis:
	"""Full symmetric eigendecomposition K = U diag(Lambda) U^T, largest eigenvalue first."""
	K = np.asarray(K, dtype=np.float64)
	if K.ndim != 2 or K.shape[0] != K.shape[1]:
		raise ArgumentError(f'expected a square matrix, got shape {K.shape}')
	asymmetry = float(np.max(np.abs(K - K.T))) if K.size else 0.0
	if asymmetry > SYMMETRY_TOLERANCE:
		raise ArgumentError(f'kernel matrix is not symmetric (max |K - K^T| = {asymmetry:.3e})')

	values, vectors = eigh(K)
	values, vectors = values[::-1], vectors[:, ::-1]
	# fix each eigenvector's sign so its largest-magnitude entry is positive
	if vectors.size:
		pivots = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])]
		vectors = vectors * np.where(pivots < 0, -1.0, 1.0)
	return EigenBasis(U=np.ascontiguousarray(vectors), Lambda=np.ascontiguousarray(values))


def eigen_share(basis: EigenBasis, ds: Sequence[int]) -> list[float]:
	"""Cumulative share of the (non-negative) spectrum held by the leading d eigenvalues."""
	clipped = np.clip(basis.Lambda, 0.0, None)
	total = clipped.sum()
	cumulative = np.cumsum(clipped)
	return [float(cumulative[d - 1] / total) if total > 0 else 0.0 for d in ds]


def _softmax_objective(flat_beta: np.ndarray, u_d: np.ndarray, onehot: np.ndarray, reg: float) -> tuple[float, np.ndarray]:
	n, c = onehot.shape
	beta = flat_beta.reshape(u_d.shape[1], c)
	logits = u_d @ beta
	log_norm = logsumexp(logits, axis=1, keepdims=True)
	cost = -np.sum(onehot * (logits - log_norm)) / n + reg * np.sum(beta * beta)
	grad = u_d.T @ (np.exp(logits - log_norm) - onehot) / n + 2.0 * reg * beta
	return float(cost), grad.ravel()


def fit_softmax(
	u_d: np.ndarray,
	labels: np.ndarray,
	reg: float = 1e-6,
	n_classes: int | None = None,
	max_iters: int = 500,
	tol: float = 1e-6,
) -> SoftmaxModel:
	"""
	Multinomial logistic regression without intercept: minimizes the mean cross-entropy of
	softmax(u_d beta) plus reg * ||beta||^2, by L-BFGS-B until the largest absolute
	component of the projected gradient drops below tol.
	"""
	u_d = np.asarray(u_d, dtype=np.float64)
	labels = np.asarray(labels)
	if u_d.ndim != 2 or u_d.shape[1] < 1:
		raise ArgumentError(f'u_d must be an n×d matrix with d >= 1, got shape {u_d.shape}')
	if labels.shape != (u_d.shape[0],):
		raise ArgumentError(f'{u_d.shape[0]} rows but labels have shape {labels.shape}')
	if np.unique(labels).size < 2:
		raise DegenerateProblemError('softmax fit needs at least two classes present')
	c = n_classes or int(labels.max()) + 1
	onehot = np.eye(c)[labels]

	result = minimize(
		_softmax_objective,
		np.zeros(u_d.shape[1] * c),
		args=(u_d, onehot, reg),
		jac=True,
		method='L-BFGS-B',
		options={'maxiter': max_iters, 'gtol': tol},
	)
	if not result.success:
		logger.debug(f'softmax fit stopped early: {result.message}')
	return SoftmaxModel(beta=result.x.reshape(u_d.shape[1], c))


def predict(model: SoftmaxModel, features: np.ndarray) -> np.ndarray:
	# argmax keeps the lowest class index on ties
	return np.argmax(softmax(features @ model.beta, axis=1), axis=1)


def softmax_cross_entropy(model: SoftmaxModel, u_d: np.ndarray, labels: np.ndarray, reg: float = 0.0) -> float:
	onehot = np.eye(model.c)[np.asarray(labels)]
	cost, _ = _softmax_objective(model.beta.ravel(), u_d, onehot, reg)
	return cost


def project_test(basis: EigenBasis, K_cross: np.ndarray, d: int) -> Projection:
	"""Nystrom extension K_cross U_d Lambda_d^-1; reproduces U_d when K_cross is the training kernel."""
	if not 1 <= d <= basis.n:
		raise ArgumentError(f'd must lie in [1, {basis.n}], got {d}')
	if K_cross.ndim != 2 or K_cross.shape[1] != basis.n:
		raise ArgumentError(f'K_cross must have {basis.n} columns, got shape {K_cross.shape}')
	d_used = int(np.count_nonzero(basis.Lambda[:d] > EIGENVALUE_FLOOR))
	values = K_cross @ basis.U[:, :d_used] / basis.Lambda[:d_used]
	projection = Projection(values=values, d_requested=d, d_used=d_used)
	if projection.reduced:
		logger.warning(f'Only {d_used} of {d} requested components have eigenvalues above {EIGENVALUE_FLOOR}; projecting onto {d_used}')
	return projection


def error_rate(predicted: np.ndarray, labels: np.ndarray) -> float:
	if labels.size == 0:
		return 0.0
	return float(1.0 - np.mean(predicted == labels))


def default_d_grid(n: int) -> list[int]:
	grid = []
	d = 1
	while d < n:
		grid.append(d)
		d *= 2
	return grid + [n] if n >= 1 else grid


@time_execution_sync('--error_curve')
def error_curve(
	train_repr: FeatureMatrix,
	test_repr: FeatureMatrix,
	labels_train: np.ndarray,
	labels_test: np.ndarray,
	ds: Sequence[int],
	sigma: float | None = None,
	cfg: ProbeConfig | None = None,
	layer_index: int = 0,
	n_classes: int | None = None,
) -> ErrorCurve:
	"""
	Training and testing error of a softmax classifier on the leading d kernel-PCA components,
	for every d in `ds`.
	"""
	cfg = cfg or ProbeConfig()
	sigma = sigma if sigma is not None else cfg.sigma
	if not (train_repr.normalized and test_repr.normalized):
		raise PreconditionError('error_curve needs row-normalized representations')
	labels_train = np.asarray(labels_train)
	labels_test = np.asarray(labels_test)
	n = train_repr.n
	grid = sorted(set(int(d) for d in ds))
	if not grid or grid[0] < 1 or grid[-1] > n:
		raise ArgumentError(f'every d must lie in [1, {n}]')
	c = n_classes or int(max(labels_train.max(), labels_test.max(initial=0))) + 1

	basis = eigendecompose(gaussian_gram(train_repr, sigma))
	K_cross = gaussian_cross_gram(test_repr, train_repr, sigma)
	# U columns are unit-norm (entries ~ 1/sqrt(n)); rescaling keeps the fit well conditioned
	scale = np.sqrt(n)

	def evaluate_d(d: int) -> tuple[float, float]:
		projection = project_test(basis, K_cross, d)
		u_d = basis.U[:, : projection.d_used] * scale
		model = fit_softmax(u_d, labels_train, reg=cfg.reg, n_classes=c, max_iters=cfg.max_iters, tol=cfg.tol)
		train_err = error_rate(predict(model, u_d), labels_train)
		test_err = error_rate(predict(model, projection.values * scale), labels_test)
		loss = softmax_cross_entropy(model, u_d, labels_train)
		logger.debug(f'layer {layer_index} d={d}: loss {loss:.4f} train {train_err:.4f} test {test_err:.4f}')
		return train_err, test_err

	if cfg.workers > 1:
		with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
			errors = list(pool.map(evaluate_d, grid))
	else:
		errors = [evaluate_d(d) for d in grid]

	curve = ErrorCurve(
		layer_index=layer_index,
		ds=grid,
		train_err=[train for train, _ in errors],
		test_err=[test for _, test in errors],
		eigen_share=eigen_share(basis, grid),
	)
	logger.info(f'Layer {layer_index}: kPCA train error {curve.train_err[0]:.3f} (d={grid[0]}) -> {curve.train_err[-1]:.3f} (d={grid[-1]})')
	return curve


def write_curves_csv(curves: Sequence[ErrorCurve], path: str | Path) -> None:
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(['layer', 'd', 'train_err', 'test_err'])
	for curve in curves:
		for d, train_err, test_err in curve.rows():
			writer.writerow([curve.layer_index, d, repr(train_err), repr(test_err)])
	atomic_write_text(path, buffer.getvalue())


def write_spectrum_csv(curves: Sequence[ErrorCurve], path: str | Path) -> None:
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(['layer', 'd', 'share'])
	for curve in curves:
		for d, share in zip(curve.ds, curve.eigen_share):
			writer.writerow([curve.layer_index, d, repr(share)])
	atomic_write_text(path, buffer.getvalue())
