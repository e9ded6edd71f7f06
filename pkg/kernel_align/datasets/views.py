from dataclasses import dataclass, field

import numpy as np

from kernel_align.exceptions import DataConsistencyError

MNIST_IMAGE_MAGIC = 0x00000803
MNIST_LABEL_MAGIC = 0x00000801
CIFAR10_RECORD_BYTES = 3073
CIFAR10_PIXEL_BYTES = 3072
CIFAR10_CLASSES = 10
MNIST_CLASSES = 10


@dataclass(frozen=True)
class LabeledDataset:
	"""
	Sample matrix (rows = samples, values in [0,1]) with integer class labels in [0, c).
	"""

	samples: np.ndarray
	labels: np.ndarray
	c: int = field(default=0)

	def __post_init__(self):
		samples = np.array(self.samples, dtype=np.float64)
		labels = np.array(self.labels, dtype=np.int64)
		if samples.ndim != 2:
			raise DataConsistencyError(f'samples must be a 2-D matrix, got shape {samples.shape}')
		if labels.ndim != 1 or labels.shape[0] != samples.shape[0]:
			raise DataConsistencyError(f'{samples.shape[0]} samples but {labels.shape[0]} labels')
		c = self.c or (int(labels.max()) + 1 if labels.size else 0)
		if labels.size and (labels.min() < 0 or labels.max() >= c):
			raise DataConsistencyError(f'labels must lie in [0, {c})')
		samples.setflags(write=False)
		labels.setflags(write=False)
		object.__setattr__(self, 'samples', samples)
		object.__setattr__(self, 'labels', labels)
		object.__setattr__(self, 'c', c)

	@property
	def n(self) -> int:
		return self.samples.shape[0]

	@property
	def d(self) -> int:
		return self.samples.shape[1]
