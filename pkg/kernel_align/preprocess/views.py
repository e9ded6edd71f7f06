from dataclasses import dataclass

import numpy as np

from kernel_align.exceptions import ArgumentError


@dataclass(frozen=True)
class FeatureMatrix:
	"""n×d feature rows; `normalized` records whether per-row centering and unit scaling were applied."""

	rows: np.ndarray
	normalized: bool = False

	def __post_init__(self):
		rows = np.asarray(self.rows, dtype=np.float64)
		if rows.ndim != 2:
			raise ArgumentError(f'FeatureMatrix rows must be 2-D, got shape {rows.shape}')
		object.__setattr__(self, 'rows', rows)

	@property
	def n(self) -> int:
		return self.rows.shape[0]

	@property
	def d(self) -> int:
		return self.rows.shape[1]
