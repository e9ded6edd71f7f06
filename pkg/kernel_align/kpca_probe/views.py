from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kernel_align.exceptions import ArgumentError
from kernel_align.kernel.views import DEFAULT_SIGMA

# Components whose eigenvalue falls at or below this are dropped from projections.
EIGENVALUE_FLOOR = 1e-10


@dataclass(frozen=True)
class EigenBasis:
	"""Eigenvalues sorted descending with unit-length eigenvectors as the columns of U."""

	U: np.ndarray
	Lambda: np.ndarray

	@property
	def n(self) -> int:
		return self.Lambda.shape[0]


@dataclass(frozen=True)
class SoftmaxModel:
	beta: np.ndarray  # d×c

	def __post_init__(self):
		if self.beta.ndim != 2 or not np.all(np.isfinite(self.beta)):
			raise ArgumentError('softmax coefficients must be a finite 2-D matrix')

	@property
	def d(self) -> int:
		return self.beta.shape[0]

	@property
	def c(self) -> int:
		return self.beta.shape[1]


@dataclass(frozen=True)
class Projection:
	"""Out-of-sample coordinates; d_used < d_requested when trailing eigenvalues were too small."""

	values: np.ndarray
	d_requested: int
	d_used: int

	@property
	def reduced(self) -> bool:
		return self.d_used < self.d_requested


@dataclass
class ErrorCurve:
	layer_index: int
	ds: list[int] = field(default_factory=list)
	train_err: list[float] = field(default_factory=list)
	test_err: list[float] = field(default_factory=list)
	eigen_share: list[float] = field(default_factory=list)

	def rows(self):
		yield from zip(self.ds, self.train_err, self.test_err)


class ProbeConfig(BaseModel):
	model_config = ConfigDict(extra='forbid', validate_assignment=True)

	sigma: float = Field(default=DEFAULT_SIGMA, gt=0)
	reg: float = Field(default=1e-6, ge=0)
	max_iters: int = Field(default=500, ge=1)
	tol: float = Field(default=1e-6, gt=0)  # bound on the largest absolute gradient component
	workers: int = Field(default=1, ge=1)
