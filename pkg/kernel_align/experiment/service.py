import csv
import io
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from kernel_align.datasets.service import load_cifar10, load_cifar10_dir, load_idx, load_mnist, subsample
from kernel_align.datasets.views import LabeledDataset
from kernel_align.exceptions import ConfigError, DataIOError
from kernel_align.experiment.plot import Series, line_plot_svg
from kernel_align.experiment.views import CompareRow, ExperimentConfig
from kernel_align.heads_baseline.service import train_baseline_dnn, train_head, write_report_csv
from kernel_align.heads_baseline.views import FitReport
from kernel_align.kpca_probe.service import default_d_grid, error_curve, write_curves_csv, write_spectrum_csv
from kernel_align.kpca_probe.views import ErrorCurve
from kernel_align.layer_trainer.service import write_trace_csv
from kernel_align.network.service import export_filters, load_stack, save_stack, train_stack, transform
from kernel_align.network.views import LayerStack
from kernel_align.preprocess.service import normalize_rows
from kernel_align.utils import atomic_write_text, time_execution_sync

logger = logging.getLogger(__name__)

WEIGHTS_FILE = 'weights.kstk'
DATA_DIR_ENV = {'mnist': 'KERNEL_ALIGN_MNIST_DIR', 'cifar10': 'KERNEL_ALIGN_CIFAR_DIR'}


def _load_split(cfg: ExperimentConfig, split: str) -> LabeledDataset:
	files = cfg.train_files if split == 'train' else cfg.test_files
	if files:
		if cfg.dataset == 'mnist':
			if len(files) != 2:
				raise ConfigError(f'{split}_files for mnist must list the images file then the labels file')
			return load_idx(files[0], files[1])
		return load_cifar10(files)

	data_dir = cfg.data_dir or os.getenv(DATA_DIR_ENV[cfg.dataset])
	if not data_dir:
		raise ConfigError(f'no data_dir, {split}_files or {DATA_DIR_ENV[cfg.dataset]} given for {cfg.dataset}')
	if cfg.dataset == 'mnist':
		return load_mnist(data_dir, split)
	return load_cifar10_dir(data_dir, split)


def load_experiment_data(cfg: ExperimentConfig) -> tuple[LabeledDataset, LabeledDataset]:
	"""Full training split and the (optionally subsampled) test split."""
	train = _load_split(cfg, 'train')
	test = _load_split(cfg, 'test')
	if train.d != test.d:
		raise ConfigError(f'training data has {train.d} features but test data has {test.d}')
	if cfg.test_size is not None and cfg.test_size < test.n:
		test = subsample(test, cfg.test_size, cfg.seed)
	logger.info(f'{cfg.dataset}: {train.n} training and {test.n} test samples of dimension {train.d}')
	return train, test


def training_subset(cfg: ExperimentConfig, train: LabeledDataset, size: int) -> LabeledDataset:
	if size > train.n:
		raise ConfigError(f'requested {size} training samples but only {train.n} are available')
	return subsample(train, size, cfg.seed)


@time_execution_sync('--cmd_train_stack')
def cmd_train_stack(cfg: ExperimentConfig) -> Path:
	"""Train cfg.layer_widths greedily on a seeded subset; write the weight file and per-layer traces."""
	train, _ = load_experiment_data(cfg)
	subset = training_subset(cfg, train, cfg.train_size)
	stack, traces = train_stack(subset, cfg.layer_widths, cfg.train_config())

	out_dir = Path(cfg.out_dir)
	weights_path = out_dir / WEIGHTS_FILE
	save_stack(stack, weights_path)
	if not load_stack(weights_path).same_as(stack):
		raise DataIOError(f'{weights_path} does not read back as the stack that was written')
	for index, trace in enumerate(traces, start=1):
		write_trace_csv(trace, out_dir / f'layer_{index}_trace.csv')
		logger.result(f'layer {index}: cost {trace.initial_cost:.6f} -> {trace.final_cost:.6f} ({trace.iters_run} iterations)')
	logger.info(f'Wrote {stack.depth}-layer stack to {weights_path}')
	return weights_path


def _check_stack(stack: LayerStack, ds: LabeledDataset, weights_path: str | Path) -> None:
	if stack.depth and stack.input_dim != ds.d:
		raise ConfigError(f'{weights_path} expects {stack.input_dim} input features but the {ds.d}-feature dataset was configured')


@time_execution_sync('--cmd_kpca')
def cmd_kpca(cfg: ExperimentConfig, weights_path: str | Path) -> list[ErrorCurve]:
	"""kPCA error curves for layer 0 (normalized input) through the last layer of the stack."""
	stack = load_stack(weights_path)
	train, test = load_experiment_data(cfg)
	_check_stack(stack, train, weights_path)
	subset = training_subset(cfg, train, cfg.train_size)
	ds = [d for d in (cfg.d_grid or default_d_grid(subset.n)) if d <= subset.n]
	if not ds:
		raise ConfigError(f'd_grid has no value within [1, {subset.n}]')

	curves = []
	for layer in range(stack.depth + 1):
		train_repr = normalize_rows(transform(stack, subset, layer))
		test_repr = normalize_rows(transform(stack, test, layer))
		curve = error_curve(
			train_repr,
			test_repr,
			subset.labels,
			test.labels,
			ds,
			cfg=cfg.probe_config(),
			layer_index=layer,
			n_classes=max(subset.c, test.c),
		)
		curves.append(curve)
		for d, train_err, test_err in curve.rows():
			logger.result(f'layer {layer} d={d}: train_err {train_err:.4f} test_err {test_err:.4f}')

	out_dir = Path(cfg.out_dir)
	write_curves_csv(curves, out_dir / 'kpca.csv')
	write_spectrum_csv(curves, out_dir / 'spectrum.csv')
	for kind in ('train', 'test'):
		series = [Series(f'layer {c.layer_index}', c.ds, c.train_err if kind == 'train' else c.test_err) for c in curves]
		svg = line_plot_svg(series, f'kPCA {kind}ing error ({cfg.dataset})', 'kPCA components d', f'{kind} error', log_x=True, y_range=(0.0, 1.0))
		atomic_write_text(out_dir / f'kpca_{kind}.svg', svg)
	return curves


def _run_variant(
	cfg: ExperimentConfig, variant: str, subset: LabeledDataset, test: LabeledDataset
) -> tuple[CompareRow, FitReport]:
	layers = len(cfg.layer_widths)
	if variant == 'layerwise':
		stack, _ = train_stack(subset, cfg.layer_widths, cfg.train_config())
		features = normalize_rows(transform(stack, subset, stack.depth))
		features_test = normalize_rows(transform(stack, test, stack.depth))
		_, report = train_head(
			features, subset.labels, features_test, test.labels, cfg.head_config(), n_classes=max(subset.c, test.c)
		)
	else:
		_, report = train_baseline_dnn(subset, test, cfg.layer_widths, cfg.head_config())
	return CompareRow(train_size=subset.n, variant=variant, layers=layers, test_acc=report.test_acc), report


@time_execution_sync('--cmd_compare')
def cmd_compare(cfg: ExperimentConfig) -> list[CompareRow]:
	"""Layer-wise stack + FC head against the same architecture trained end to end, per training size."""
	train, test = load_experiment_data(cfg)
	jobs = [(size, variant) for size in cfg.train_sizes for variant in ('layerwise', 'dnn')]
	subsets = {size: training_subset(cfg, train, size) for size in cfg.train_sizes}

	def run(job: tuple[int, str]) -> tuple[CompareRow, FitReport]:
		size, variant = job
		return _run_variant(cfg, variant, subsets[size], test)

	if cfg.workers > 1:
		with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
			results = list(pool.map(run, jobs))
	else:
		results = [run(job) for job in jobs]

	rows = [row for row, _ in results]
	for row in rows:
		logger.result(f'n={row.train_size} {row.variant} ({row.layers} layer(s)): test accuracy {row.test_acc:.4f}')

	out_dir = Path(cfg.out_dir)
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(['train_size', 'variant', 'layers', 'test_acc'])
	for row in rows:
		writer.writerow([row.train_size, row.variant, row.layers, repr(row.test_acc)])
	atomic_write_text(out_dir / 'compare.csv', buffer.getvalue())
	write_report_csv([(f'{row.variant}@{row.train_size}', report) for row, report in results], out_dir / 'compare_reports.csv')

	series = [
		Series(variant, [r.train_size for r in rows if r.variant == variant], [r.test_acc for r in rows if r.variant == variant])
		for variant in ('layerwise', 'dnn')
	]
	svg = line_plot_svg(series, f'Test accuracy vs training size ({cfg.dataset})', 'training samples', 'test accuracy', y_range=(0.0, 1.0))
	atomic_write_text(out_dir / 'compare.svg', svg)
	return rows


def cmd_export_filters(cfg: ExperimentConfig, weights_path: str | Path, layer: int = 1) -> Path:
	stack = load_stack(weights_path)
	path = Path(cfg.out_dir) / f'filters_layer_{layer}.csv'
	export_filters(stack, layer, path)
	logger.info(f'Wrote {stack.layers[layer - 1].p} filters of layer {layer} to {path}')
	return path
