from dataclasses import dataclass

import numpy as np

from kernel_align.exceptions import ArgumentError

DEFAULT_SIGMA = 1.0


@dataclass(frozen=True)
class KernelPair:
	"""A Gaussian Gram matrix K and the ideal label kernel T over the same samples."""

	K: np.ndarray
	T: np.ndarray
	sigma: float = DEFAULT_SIGMA

	def __post_init__(self):
		if self.K.shape != self.T.shape:
			raise ArgumentError(f'K has shape {self.K.shape} but T has shape {self.T.shape}')
		if self.K.ndim != 2 or self.K.shape[0] != self.K.shape[1]:
			raise ArgumentError(f'kernel matrices must be square, got {self.K.shape}')

	@property
	def n(self) -> int:
		return self.K.shape[0]
