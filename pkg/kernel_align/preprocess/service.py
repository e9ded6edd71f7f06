import numpy as np

from kernel_align.exceptions import ArgumentError
from kernel_align.preprocess.views import FeatureMatrix

# Rows whose centered norm falls below this become exact zero rows.
DEGENERATE_NORM = 1e-12


def center_and_scale(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""
	Center every row on its own mean and divide by its Euclidean norm.

	Returns (normalized rows, centered rows, norms). Norms of degenerate rows
	are reported as-is; their normalized rows are zero.
	"""
	centered = rows - rows.mean(axis=1, keepdims=True)
	norms = np.linalg.norm(centered, axis=1)
	live = norms >= DEGENERATE_NORM
	normalized = np.zeros_like(centered)
	normalized[live] = centered[live] / norms[live, None]
	return normalized, centered, norms


def normalize_rows(m: FeatureMatrix) -> FeatureMatrix:
	if m.d < 1:
		raise ArgumentError('normalize_rows needs at least one column')
	normalized, _, _ = center_and_scale(m.rows)
	return FeatureMatrix(rows=normalized, normalized=True)


def append_bias(m: FeatureMatrix) -> FeatureMatrix:
	"""Append a column of ones; the result is no longer unit-norm so `normalized` is cleared."""
	ones = np.ones((m.n, 1), dtype=m.rows.dtype)
	return FeatureMatrix(rows=np.hstack([m.rows, ones]), normalized=False)
