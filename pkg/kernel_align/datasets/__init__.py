from kernel_align.datasets.service import (
	load_cifar10,
	load_cifar10_dir,
	load_idx,
	load_mnist,
	subsample,
	train_test_split,
)
from kernel_align.datasets.views import LabeledDataset

__all__ = [
	'LabeledDataset',
	'load_cifar10',
	'load_cifar10_dir',
	'load_idx',
	'load_mnist',
	'subsample',
	'train_test_split',
]
