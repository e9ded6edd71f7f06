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

__all__ = [
	'KernelPair',
	'alignment_cost',
	'alignment_score',
	'gaussian_cross_gram',
	'gaussian_gram',
	'kernel_pair',
	'pairwise_rbf',
	'target_kernel',
]
