import csv
import io
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from kernel_align.datasets.views import LabeledDataset
from kernel_align.exceptions import ArgumentError, NumericalError
from kernel_align.heads_baseline.views import FitReport, HeadConfig, MlpModel
from kernel_align.layer_trainer.service import cost_rose, has_converged
from kernel_align.preprocess.service import normalize_rows
from kernel_align.preprocess.views import FeatureMatrix
from kernel_align.utils import atomic_write_text, ensure_finite, time_execution_sync

logger = logging.getLogger(__name__)


def init_mlp(layer_dims: Sequence[int], seed: int) -> MlpModel:
	"""Weights drawn from N(0, 1) / sqrt(fan_in), seeded; biases start at zero."""
	rng = np.random.default_rng(seed)
	weights = []
	for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
		w = np.zeros((fan_in + 1, fan_out))
		w[:-1] = rng.standard_normal((fan_in, fan_out)) / np.sqrt(fan_in)
		weights.append(w)
	return MlpModel(layer_dims=tuple(layer_dims), weights=tuple(weights))


def _augment(x: np.ndarray) -> np.ndarray:
	return np.hstack([x, np.ones((x.shape[0], 1))])


def _logits(weights: Sequence[np.ndarray], x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
	"""Returns output logits, the bias-augmented input of every layer, and every hidden activation."""
	inputs, hidden = [], []
	current = x
	for index, w in enumerate(weights):
		augmented = _augment(current)
		inputs.append(augmented)
		z = augmented @ w
		if index == len(weights) - 1:
			return z, inputs, hidden
		current = np.tanh(z)
		hidden.append(current)
	raise ArgumentError('model has no layers')


def _features(features: FeatureMatrix | np.ndarray) -> np.ndarray:
	return features.rows if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=np.float64)


def cost_and_gradients(
	model: MlpModel, features: FeatureMatrix | np.ndarray, labels: np.ndarray, lam: float
) -> tuple[float, list[np.ndarray]]:
	"""Mean cross-entropy plus lam * sum ||W||^2 over all layers, and its gradient by backprop."""
	x = _features(features)
	labels = np.asarray(labels)
	n = x.shape[0]
	logits, inputs, hidden = _logits(model.weights, x)
	log_probs = logits - logsumexp(logits, axis=1, keepdims=True)
	onehot = np.eye(model.n_classes)[labels]
	cost = float(-np.sum(onehot * log_probs) / n + lam * sum(np.sum(w * w) for w in model.weights))
	ensure_finite('cost', cost)

	grads: list[np.ndarray] = [np.empty(0)] * len(model.weights)
	delta = (np.exp(log_probs) - onehot) / n
	for index in range(len(model.weights) - 1, -1, -1):
		w = model.weights[index]
		grads[index] = inputs[index].T @ delta + 2.0 * lam * w
		if index > 0:
			activation = hidden[index - 1]
			delta = (delta @ w[:-1].T) * (1.0 - activation * activation)
	ensure_finite('gradient', *grads)
	return cost, grads


def predict_classes(model: MlpModel, features: FeatureMatrix | np.ndarray) -> np.ndarray:
	x = _features(features)
	if x.shape[1] != model.input_dim:
		raise ArgumentError(f'model expects {model.input_dim} features, got {x.shape[1]}')
	logits, _, _ = _logits(model.weights, x)
	# argmax keeps the lowest class index on ties
	return np.argmax(logits, axis=1)


def evaluate(model: MlpModel, features: FeatureMatrix | np.ndarray, labels: np.ndarray) -> float:
	x = _features(features)
	labels = np.asarray(labels)
	if x.ndim != 2 or x.shape[1] != model.input_dim:
		raise ArgumentError(f'model expects {model.input_dim} features, got shape {x.shape}')
	if labels.shape != (x.shape[0],):
		raise ArgumentError(f'{x.shape[0]} samples but labels have shape {labels.shape}')
	if x.shape[0] == 0:
		logger.warning('evaluate called on an empty set, reporting accuracy 1.0')
		return 1.0
	return float(np.mean(predict_classes(model, x) == labels))


def _fit(
	model: MlpModel,
	x_train: np.ndarray,
	y_train: np.ndarray,
	x_test: np.ndarray,
	y_test: np.ndarray,
	cfg: HeadConfig,
	name: str,
) -> tuple[MlpModel, FitReport]:
	weights = list(model.weights)
	losses: list[float] = []

	def step_cost(current: list[np.ndarray]) -> tuple[float, list[np.ndarray]]:
		try:
			return cost_and_gradients(MlpModel(model.layer_dims, tuple(current)), x_train, y_train, cfg.lam)
		except (NumericalError, ArgumentError) as e:
			raise NumericalError(getattr(e, 'stage', 'weights'), f'{name} diverged after {max(len(losses) - 1, 0)} epochs', trace=losses) from e

	cost, grads = step_cost(weights)
	losses.append(cost)
	warned_rising = False
	for epoch in range(1, cfg.max_iters + 1):
		weights = [w - cfg.learning_rate * g for w, g in zip(weights, grads)]
		cost, grads = step_cost(weights)
		losses.append(cost)
		if epoch % cfg.log_every == 0:
			logger.debug(f'{name} epoch {epoch}: loss {cost:.6f}')
		if has_converged(losses, cfg.window, cfg.tol):
			break
		if not warned_rising and cost_rose(losses, cfg.window):
			logger.warning(f'{name} loss rose over the last {cfg.window} epochs at epoch {epoch}; learning_rate {cfg.learning_rate} may be too large')
			warned_rising = True

	fitted = MlpModel(layer_dims=model.layer_dims, weights=tuple(weights))
	report = FitReport(
		train_loss=losses[-1],
		train_acc=evaluate(fitted, x_train, y_train),
		test_acc=evaluate(fitted, x_test, y_test),
		epochs=len(losses) - 1,
		losses=losses,
	)
	logger.info(
		f'{name} {list(model.layer_dims)}: loss {losses[0]:.4f} -> {losses[-1]:.4f} in {report.epochs} epochs, '
		f'train acc {report.train_acc:.4f}, test acc {report.test_acc:.4f}'
	)
	return fitted, report


def _class_count(*label_sets: np.ndarray) -> int:
	return int(max(labels.max(initial=0) for labels in label_sets)) + 1


@time_execution_sync('--train_head')
def train_head(
	features: FeatureMatrix,
	labels_train: np.ndarray,
	features_test: FeatureMatrix,
	labels_test: np.ndarray,
	cfg: HeadConfig,
	n_classes: int | None = None,
) -> tuple[MlpModel, FitReport]:
	"""Fit a [d -> hidden tanh -> c softmax] classifier on frozen features; the features are only read."""
	x_train, x_test = _features(features), _features(features_test)
	if x_train.shape[1] != x_test.shape[1]:
		raise ArgumentError(f'training features have {x_train.shape[1]} columns, test features {x_test.shape[1]}')
	y_train, y_test = np.asarray(labels_train), np.asarray(labels_test)
	c = n_classes or _class_count(y_train, y_test)
	model = init_mlp([x_train.shape[1], cfg.hidden, c], cfg.seed)
	return _fit(model, x_train, y_train, x_test, y_test, cfg, 'head')


def baseline_dims(input_dim: int, hidden_dims: Sequence[int], head_width: int, n_classes: int) -> list[int]:
	"""[d, *hidden_dims, FC head, c]: the backprop twin of a layer-wise stack plus its head."""
	return [input_dim, *hidden_dims, head_width, n_classes]


@time_execution_sync('--train_baseline_dnn')
def train_baseline_dnn(
	ds_train: LabeledDataset,
	ds_test: LabeledDataset,
	hidden_dims: Sequence[int],
	cfg: HeadConfig,
) -> tuple[MlpModel, FitReport]:
	"""End-to-end backprop on the same architecture and preprocessing as the layer-wise path."""
	if ds_train.d != ds_test.d:
		raise ArgumentError(f'training samples have {ds_train.d} features, test samples {ds_test.d}')
	x_train = normalize_rows(FeatureMatrix(rows=ds_train.samples)).rows
	x_test = normalize_rows(FeatureMatrix(rows=ds_test.samples)).rows
	c = max(ds_train.c, ds_test.c, _class_count(ds_train.labels, ds_test.labels))
	model = init_mlp(baseline_dims(ds_train.d, hidden_dims, cfg.hidden, c), cfg.seed)
	return _fit(model, x_train, ds_train.labels, x_test, ds_test.labels, cfg, 'baseline')


def write_report_csv(reports: Sequence[tuple[str, FitReport]], path: str | Path) -> None:
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(['variant', 'train_loss', 'train_acc', 'test_acc', 'epochs'])
	for variant, report in reports:
		writer.writerow([variant, repr(report.train_loss), repr(report.train_acc), repr(report.test_acc), report.epochs])
	atomic_write_text(path, buffer.getvalue())
