import csv
import io
import logging
import struct
from pathlib import Path

import numpy as np

from kernel_align.datasets.views import LabeledDataset
from kernel_align.exceptions import ArgumentError, ConfigError, DataFormatError, DataIOError
from kernel_align.kernel.service import alignment_score, kernel_pair
from kernel_align.layer_trainer.service import forward, train_layer
from kernel_align.layer_trainer.views import LayerParams, TrainConfig, TrainTrace
from kernel_align.network.views import STACK_FORMAT_VERSION, STACK_MAGIC, LayerStack, weights_without_bias
from kernel_align.preprocess.service import normalize_rows
from kernel_align.preprocess.views import FeatureMatrix
from kernel_align.utils import atomic_write_bytes, atomic_write_text, time_execution_sync

logger = logging.getLogger(__name__)

# magic | u32 version | u32 layer count
_HEADER = struct.Struct('<4sII')
# u32 rows | u32 cols | f64 sigma
_LAYER_HEADER = struct.Struct('<IId')


def transform(stack: LayerStack, ds: LabeledDataset | FeatureMatrix, upto: int) -> FeatureMatrix:
	"""
	Run the first `upto` layers. upto = 0 gives the row-normalized input; otherwise the last
	requested layer's tanh output is returned without trailing normalization.
	"""
	if not 0 <= upto <= stack.depth:
		raise ArgumentError(f'upto must lie in [0, {stack.depth}], got {upto}')
	raw = ds if isinstance(ds, FeatureMatrix) else FeatureMatrix(rows=ds.samples)
	if stack.depth and raw.d != stack.input_dim:
		raise ConfigError(f'layer 1 expects {stack.input_dim} input features, data has {raw.d}')

	current = normalize_rows(raw)
	for index, layer in enumerate(stack.layers[:upto], start=1):
		output = forward(current, layer)
		current = output if index == upto else normalize_rows(output)
	return current


@time_execution_sync('--train_stack')
def train_stack(ds: LabeledDataset, widths: list[int], cfg: TrainConfig) -> tuple[LayerStack, list[TrainTrace]]:
	"""Greedy layer-wise training: layer k is fit on the normalized output of layers 1..k-1 and then frozen."""
	if not widths:
		raise ArgumentError('at least one layer width is required')
	layers: list[LayerParams] = []
	traces: list[TrainTrace] = []
	current = normalize_rows(FeatureMatrix(rows=ds.samples))

	for index, width in enumerate(widths, start=1):
		logger.info(f'Training layer {index}/{len(widths)} (p={width}) on {ds.n} samples of dimension {current.d}')
		layer_cfg = cfg.model_copy(update={'seed': cfg.seed + index - 1})
		params, trace = train_layer(current, ds.labels, width, layer_cfg)
		layers.append(params)
		traces.append(trace)
		current = normalize_rows(forward(current, params))
		pair = kernel_pair(current, ds.labels, cfg.sigma)
		score = alignment_score(pair.K, pair.T)
		logger.info(f'Layer {index} kernel-target alignment: {score:.4f}')

	stack = LayerStack(layers=tuple(layers), input_dim=ds.d)
	logger.info(f'Trained {stack.depth}-layer stack: {stack.input_dim} -> {stack.output_dim} features')
	return stack, traces


def encode_stack(stack: LayerStack) -> bytes:
	chunks = [_HEADER.pack(STACK_MAGIC, STACK_FORMAT_VERSION, stack.depth)]
	for layer in stack.layers:
		rows, cols = layer.W.shape
		chunks.append(_LAYER_HEADER.pack(rows, cols, layer.sigma))
		chunks.append(np.ascontiguousarray(layer.W, dtype='<f8').tobytes())
	return b''.join(chunks)


def decode_stack(payload: bytes) -> LayerStack:
	if len(payload) < _HEADER.size:
		raise DataFormatError(f'weight file is {len(payload)} bytes, shorter than its {_HEADER.size}-byte header')
	magic, version, count = _HEADER.unpack_from(payload, 0)
	if magic != STACK_MAGIC:
		raise DataFormatError(f'bad magic {magic!r}, expected {STACK_MAGIC!r}')
	if version != STACK_FORMAT_VERSION:
		raise DataFormatError(f'unsupported weight file version {version}, expected {STACK_FORMAT_VERSION}')

	offset = _HEADER.size
	layers = []
	for index in range(1, count + 1):
		if offset + _LAYER_HEADER.size > len(payload):
			raise DataFormatError(f'weight file truncated in the header of layer {index}')
		rows, cols, sigma = _LAYER_HEADER.unpack_from(payload, offset)
		offset += _LAYER_HEADER.size
		size = rows * cols * 8
		if offset + size > len(payload):
			raise DataFormatError(f'layer {index} declares {rows}x{cols} weights but only {len(payload) - offset} payload bytes remain')
		weights = np.frombuffer(payload, dtype='<f8', count=rows * cols, offset=offset).reshape(rows, cols).astype(np.float64)
		offset += size
		try:
			layers.append(LayerParams(W=weights, sigma=sigma))
		except ArgumentError as e:
			raise DataFormatError(f'layer {index}: {e}') from e
	if offset != len(payload):
		raise DataFormatError(f'{len(payload) - offset} trailing bytes after the last layer')
	try:
		return LayerStack.from_layers(layers)
	except ConfigError as e:
		raise DataFormatError(f'inconsistent layer dimensions: {e}') from e


def save_stack(stack: LayerStack, path: str | Path) -> None:
	atomic_write_bytes(path, encode_stack(stack))
	logger.debug(f'Saved {stack.depth}-layer stack to {path}')


def load_stack(path: str | Path) -> LayerStack:
	try:
		payload = Path(path).read_bytes()
	except OSError as e:
		raise DataIOError(f'Cannot read weight file {path}: {e}') from e
	return decode_stack(payload)


def export_filters(stack: LayerStack, layer: int, path: str | Path) -> None:
	"""Write one CSV row per unit of `layer` (1-based) holding its input weights, bias excluded."""
	if not 1 <= layer <= stack.depth:
		raise ArgumentError(f'layer must lie in [1, {stack.depth}], got {layer}')
	filters = weights_without_bias(stack.layers[layer - 1])
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(['unit'] + [f'w{i}' for i in range(filters.shape[1])])
	for unit, row in enumerate(filters):
		writer.writerow([unit] + [repr(float(value)) for value in row])
	atomic_write_text(path, buffer.getvalue())
