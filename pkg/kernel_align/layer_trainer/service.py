import csv
import io
import logging
from pathlib import Path

import numpy as np

from kernel_align.exceptions import ArgumentError, NumericalError, PreconditionError
from kernel_align.kernel.service import cosine_to_gaussian, target_kernel
from kernel_align.layer_trainer.views import LayerParams, TrainConfig, TrainTrace
from kernel_align.preprocess.service import DEGENERATE_NORM, append_bias, center_and_scale
from kernel_align.preprocess.views import FeatureMatrix
from kernel_align.utils import atomic_write_text, ensure_finite, time_execution_sync

logger = logging.getLogger(__name__)

# step_halving gives up once the step shrinks below this
MIN_STEP = 1e-12


def forward(d_prev: FeatureMatrix, w: LayerParams) -> FeatureMatrix:
	"""X = tanh([D, 1] W)."""
	if d_prev.d + 1 != w.W.shape[0]:
		raise ArgumentError(f'input has {d_prev.d} columns (+1 bias) but W has {w.W.shape[0]} rows')
	augmented = append_bias(d_prev).rows
	return FeatureMatrix(rows=np.tanh(augmented @ w.W), normalized=False)


def _alignment_objective(
	augmented: np.ndarray,
	weights: np.ndarray,
	target: np.ndarray,
	sigma: float,
	lam: float,
) -> tuple[float, np.ndarray]:
	"""
	Cost and exact gradient of the alignment objective for a bias-augmented input.

	Forward graph: Z = A W -> X = tanh(Z) -> C = X - rowmean(X) -> Y = C / ||C|| ->
	G = Y Y^T -> K = exp((G - 1) / sigma^2) -> (1/n^2) ||K - T||^2 + lam ||W||^2.
	The backward pass walks the same stages in reverse.
	"""
	n = augmented.shape[0]

	z = augmented @ weights
	ensure_finite('linear', z)
	x = np.tanh(z)
	y, _, norms = center_and_scale(x)
	ensure_finite('normalization', y)
	live = norms >= DEGENERATE_NORM
	k = cosine_to_gaussian(y @ y.T, sigma)
	ensure_finite('kernel', k)

	residual = k - target
	cost = float(np.sum(residual * residual) / n**2 + lam * np.sum(weights * weights))
	ensure_finite('cost', cost)

	g_gram = (2.0 / n**2) * residual * k / sigma**2
	# g_gram is symmetric, so d/dY of sum(g_gram * Y Y^T) is 2 g_gram Y
	g_y = 2.0 * g_gram @ y
	radial = np.sum(g_y * y, axis=1, keepdims=True)
	g_centered = np.zeros_like(g_y)
	g_centered[live] = (g_y[live] - y[live] * radial[live]) / norms[live, None]
	g_x = g_centered - g_centered.mean(axis=1, keepdims=True)
	g_z = g_x * (1.0 - x * x)
	grad = augmented.T @ g_z + 2.0 * lam * weights
	ensure_finite('gradient', grad)
	return cost, grad


def _check_labels(d_prev: FeatureMatrix, labels: np.ndarray) -> np.ndarray:
	labels = np.asarray(labels)
	if labels.shape != (d_prev.n,):
		raise ArgumentError(f'{d_prev.n} samples but labels have shape {labels.shape}')
	return labels


def cost_and_gradient(d_prev: FeatureMatrix, w: LayerParams, labels: np.ndarray, cfg: TrainConfig) -> tuple[float, np.ndarray]:
	if d_prev.d + 1 != w.W.shape[0]:
		raise ArgumentError(f'input has {d_prev.d} columns (+1 bias) but W has {w.W.shape[0]} rows')
	labels = _check_labels(d_prev, labels)
	augmented = append_bias(d_prev).rows
	return _alignment_objective(augmented, w.W, target_kernel(labels), w.sigma, cfg.lam)


def has_converged(costs: list[float], window: int, tol: float) -> bool:
	"""
	True once the cost fell by a non-negative amount smaller than `tol` (relative) over
	the last `window` iterations. A cost that rose over the window never counts.
	"""
	if len(costs) <= window:
		return False
	previous, current = costs[-window - 1], costs[-1]
	return 0.0 <= previous - current <= tol * max(abs(previous), np.finfo(float).tiny)


def cost_rose(costs: list[float], window: int) -> bool:
	"""True when the latest cost is above the cost `window` iterations earlier."""
	return len(costs) > window and costs[-1] > costs[-window - 1]


@time_execution_sync('--train_layer')
def train_layer(d_prev: FeatureMatrix, labels: np.ndarray, p: int, cfg: TrainConfig) -> tuple[LayerParams, TrainTrace]:
	"""
	Full-batch gradient descent on the alignment cost for one layer of width p.

	W starts at init_scale * N(0, 1) drawn from cfg.seed and moves by W <- W - mu * gW
	until the relative cost decrease over cfg.window iterations drops below cfg.tol or
	cfg.max_iters is reached. With cfg.step_halving, steps that raise the cost are
	retried with half the step size.
	"""
	if not d_prev.normalized:
		raise PreconditionError('train_layer needs row-normalized input (apply normalize_rows first)')
	if p < 1:
		raise ArgumentError(f'layer width must be at least 1, got {p}')
	labels = _check_labels(d_prev, labels)

	rng = np.random.default_rng(cfg.seed)
	weights = cfg.init_scale * rng.standard_normal((d_prev.d + 1, p))
	augmented = append_bias(d_prev).rows
	target = target_kernel(labels)
	trace = TrainTrace()

	def objective(candidate: np.ndarray) -> tuple[float, np.ndarray]:
		try:
			return _alignment_objective(augmented, candidate, target, cfg.sigma, cfg.lam)
		except NumericalError as e:
			raise NumericalError(e.stage, f'layer training diverged after {trace.iters_run} iterations', trace=trace.costs) from e

	cost, grad = objective(weights)
	trace.costs.append(cost)
	step = cfg.learning_rate
	warned_rising = False

	for iteration in range(1, cfg.max_iters + 1):
		candidate = weights - step * grad
		candidate_cost, candidate_grad = objective(candidate)
		if cfg.step_halving:
			while candidate_cost > cost and step > MIN_STEP:
				step /= 2.0
				candidate = weights - step * grad
				candidate_cost, candidate_grad = objective(candidate)
			if candidate_cost > cost:
				logger.debug(f'Step size fell below {MIN_STEP} at iteration {iteration}, stopping')
				trace.converged = True
				break

		weights, cost, grad = candidate, candidate_cost, candidate_grad
		trace.costs.append(cost)

		if iteration % cfg.log_every == 0:
			logger.debug(f'iter {iteration}: cost {cost:.6e} |gW| {np.linalg.norm(grad):.3e}')
		if has_converged(trace.costs, cfg.window, cfg.tol):
			trace.converged = True
			break
		if not warned_rising and cost_rose(trace.costs, cfg.window):
			logger.warning(f'Cost rose over the last {cfg.window} iterations at iteration {iteration}; learning_rate {step} may be too large')
			warned_rising = True

	status = 'converged' if trace.converged else 'stopped at max_iters'
	logger.info(
		f'Layer p={p} {status} after {trace.iters_run} iterations: cost {trace.initial_cost:.6f} -> {trace.final_cost:.6f}'
	)
	return LayerParams(W=weights, sigma=cfg.sigma), trace


def write_trace_csv(trace: TrainTrace, path: str | Path) -> None:
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(['iter', 'cost'])
	for iteration, cost in enumerate(trace.costs):
		writer.writerow([iteration, repr(cost)])
	atomic_write_text(path, buffer.getvalue())
