import logging
import struct
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from kernel_align.datasets.views import (
	CIFAR10_CLASSES,
	CIFAR10_PIXEL_BYTES,
	CIFAR10_RECORD_BYTES,
	MNIST_CLASSES,
	MNIST_IMAGE_MAGIC,
	MNIST_LABEL_MAGIC,
	LabeledDataset,
)
from kernel_align.exceptions import ArgumentError, DataConsistencyError, DataFormatError, DataIOError

logger = logging.getLogger(__name__)

MNIST_FILES = {
	'train': ('train-images-idx3-ubyte', 'train-labels-idx1-ubyte'),
	'test': ('t10k-images-idx3-ubyte', 't10k-labels-idx1-ubyte'),
}
CIFAR10_FILES = {
	'train': tuple(f'data_batch_{i}.bin' for i in range(1, 6)),
	'test': ('test_batch.bin',),
}


def _read_file(path: str | Path) -> bytes:
	try:
		return Path(path).read_bytes()
	except OSError as e:
		raise DataIOError(f'Cannot read {path}: {e}') from e


def _read_be32(buffer: bytes, offset: int, path: str | Path) -> int:
	if offset + 4 > len(buffer):
		raise DataIOError(f'Truncated IDX header in {path}', offset=len(buffer))
	(value,) = struct.unpack_from('>I', buffer, offset)
	return value


def _read_payload(buffer: bytes, offset: int, size: int, path: str | Path) -> np.ndarray:
	if offset + size > len(buffer):
		raise DataIOError(f'Truncated IDX payload in {path}: expected {size} bytes', offset=len(buffer))
	return np.frombuffer(buffer, dtype=np.uint8, count=size, offset=offset)


def _parse_idx_images(path: str | Path) -> np.ndarray:
	# i32 magic | i32 count | i32 rows | i32 cols | u8[count*rows*cols]
	buffer = _read_file(path)
	magic = _read_be32(buffer, 0, path)
	if magic != MNIST_IMAGE_MAGIC:
		raise DataFormatError(f'Magic number mismatch in image file {path}: expected 0x{MNIST_IMAGE_MAGIC:08x}, got 0x{magic:08x}')
	count = _read_be32(buffer, 4, path)
	rows = _read_be32(buffer, 8, path)
	cols = _read_be32(buffer, 12, path)
	pixels = _read_payload(buffer, 16, count * rows * cols, path)
	return pixels.reshape(count, rows * cols)


def _parse_idx_labels(path: str | Path) -> np.ndarray:
	# i32 magic | i32 count | u8[count]
	buffer = _read_file(path)
	magic = _read_be32(buffer, 0, path)
	if magic != MNIST_LABEL_MAGIC:
		raise DataFormatError(f'Magic number mismatch in label file {path}: expected 0x{MNIST_LABEL_MAGIC:08x}, got 0x{magic:08x}')
	count = _read_be32(buffer, 4, path)
	return _read_payload(buffer, 8, count, path)


def load_idx(images_path: str | Path, labels_path: str | Path) -> LabeledDataset:
	"""Load an uncompressed MNIST IDX image/label pair, pixels scaled to [0,1]."""
	images = _parse_idx_images(images_path)
	labels = _parse_idx_labels(labels_path)
	if images.shape[0] != labels.shape[0]:
		raise DataConsistencyError(f'{images_path} holds {images.shape[0]} images but {labels_path} holds {labels.shape[0]} labels')
	if labels.size and labels.max() >= MNIST_CLASSES:
		raise DataFormatError(f'Label {int(labels.max())} out of range in {labels_path}')
	logger.debug(f'Loaded {images.shape[0]} IDX samples of dimension {images.shape[1]} from {images_path}')
	return LabeledDataset(samples=images / 255.0, labels=labels, c=MNIST_CLASSES)


def load_cifar10(batch_paths: Sequence[str | Path]) -> LabeledDataset:
	"""Concatenate CIFAR-10 binary batches (3073-byte records: label byte then R, G, B planes)."""
	samples: list[np.ndarray] = []
	labels: list[np.ndarray] = []
	for path in batch_paths:
		buffer = _read_file(path)
		if len(buffer) % CIFAR10_RECORD_BYTES != 0:
			raise DataFormatError(f'{path} is {len(buffer)} bytes, not a whole number of {CIFAR10_RECORD_BYTES}-byte records')
		records = np.frombuffer(buffer, dtype=np.uint8).reshape(-1, CIFAR10_RECORD_BYTES)
		batch_labels = records[:, 0]
		bad = np.flatnonzero(batch_labels >= CIFAR10_CLASSES)
		if bad.size:
			raise DataFormatError(f'Label byte {int(batch_labels[bad[0]])} >= {CIFAR10_CLASSES} in record {int(bad[0])} of {path}')
		labels.append(batch_labels)
		samples.append(records[:, 1:])
	if not samples:
		return LabeledDataset(samples=np.zeros((0, CIFAR10_PIXEL_BYTES)), labels=np.zeros(0, dtype=np.int64), c=CIFAR10_CLASSES)
	pixels = np.concatenate(samples, axis=0)
	logger.debug(f'Loaded {pixels.shape[0]} CIFAR-10 records from {len(samples)} file(s)')
	return LabeledDataset(samples=pixels / 255.0, labels=np.concatenate(labels), c=CIFAR10_CLASSES)


def _resolve(directory: Path, name: str) -> Path:
	for candidate in (name, name.replace('-idx', '.idx')):
		if (directory / candidate).exists():
			return directory / candidate
	raise DataIOError(f'{name} not found in {directory} (gzip archives must be decompressed first)')


def load_mnist(directory: str | Path, split: str = 'train') -> LabeledDataset:
	if split not in MNIST_FILES:
		raise ArgumentError(f'Unknown split {split!r}, expected one of {sorted(MNIST_FILES)}')
	images_name, labels_name = MNIST_FILES[split]
	directory = Path(directory)
	return load_idx(_resolve(directory, images_name), _resolve(directory, labels_name))


def load_cifar10_dir(directory: str | Path, split: str = 'train') -> LabeledDataset:
	if split not in CIFAR10_FILES:
		raise ArgumentError(f'Unknown split {split!r}, expected one of {sorted(CIFAR10_FILES)}')
	directory = Path(directory)
	paths = []
	for name in CIFAR10_FILES[split]:
		if not (directory / name).exists():
			raise DataIOError(f'{name} not found in {directory}')
		paths.append(directory / name)
	return load_cifar10(paths)


def subsample(ds: LabeledDataset, k: int, seed: int) -> LabeledDataset:
	"""Draw k rows without replacement from a seeded permutation; labels travel with their rows."""
	if k < 1 or k > ds.n:
		raise ArgumentError(f'Cannot subsample {k} rows from a dataset of {ds.n}')
	rng = np.random.default_rng(seed)
	index = rng.permutation(ds.n)[:k]
	return LabeledDataset(samples=ds.samples[index], labels=ds.labels[index], c=ds.c)


def train_test_split(ds: LabeledDataset, test_count: int, seed: int) -> tuple[LabeledDataset, LabeledDataset]:
	if test_count < 1 or test_count >= ds.n:
		raise ArgumentError(f'test_count must lie in [1, {ds.n}), got {test_count}')
	rng = np.random.default_rng(seed)
	order = rng.permutation(ds.n)
	test_index, train_index = order[:test_count], order[test_count:]
	train = LabeledDataset(samples=ds.samples[train_index], labels=ds.labels[train_index], c=ds.c)
	test = LabeledDataset(samples=ds.samples[test_index], labels=ds.labels[test_index], c=ds.c)
	return train, test
