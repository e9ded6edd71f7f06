import logging
import os
import tempfile
import time
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import ParamSpec, TypeVar

import numpy as np

from kernel_align.exceptions import NumericalError

logger = logging.getLogger(__name__)

R = TypeVar('R')
P = ParamSpec('P')


def time_execution_sync(additional_text: str = '') -> Callable[[Callable[P, R]], Callable[P, R]]:
	def decorator(func: Callable[P, R]) -> Callable[P, R]:
		@wraps(func)
		def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
			start_time = time.time()
			result = func(*args, **kwargs)
			execution_time = time.time() - start_time
			logger.debug(f'{additional_text} Execution time: {execution_time:.2f} seconds')
			return result

		return wrapper

	return decorator


def ensure_finite(stage: str, *arrays: np.ndarray | float, trace: list[float] | None = None) -> None:
	"""Raise NumericalError naming `stage` if any array holds NaN or inf."""
	for array in arrays:
		if not np.all(np.isfinite(array)):
			raise NumericalError(stage, trace=trace)


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
	"""Write to a temp file in the target directory, then rename over `path`."""
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)
	fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', suffix='.tmp', dir=path.parent)
	try:
		with os.fdopen(fd, 'wb') as f:
			f.write(data)
		os.replace(tmp_name, path)
	except BaseException:
		if os.path.exists(tmp_name):
			os.unlink(tmp_name)
		raise


def atomic_write_text(path: str | Path, text: str) -> None:
	atomic_write_bytes(path, text.encode('utf-8'))
