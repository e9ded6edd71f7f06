from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kernel_align.exceptions import ArgumentError
from kernel_align.kernel.views import DEFAULT_SIGMA


@dataclass(frozen=True)
class LayerParams:
	"""
	One layer's weights. W is (d+1)×p: the last input row multiplies the appended bias column.
	"""

	W: np.ndarray
	sigma: float = DEFAULT_SIGMA

	def __post_init__(self):
		weights = np.asarray(self.W, dtype=np.float64)
		if weights.ndim != 2 or weights.shape[0] < 1 or weights.shape[1] < 1:
			raise ArgumentError(f'W must be a non-empty 2-D matrix, got shape {weights.shape}')
		if not np.all(np.isfinite(weights)):
			raise ArgumentError('W contains non-finite entries')
		if not self.sigma > 0:
			raise ArgumentError(f'sigma must be positive, got {self.sigma}')
		object.__setattr__(self, 'W', weights)

	@property
	def p(self) -> int:
		return self.W.shape[1]

	@property
	def input_dim(self) -> int:
		return self.W.shape[0] - 1


class TrainConfig(BaseModel):
	"""Gradient-descent settings for training one layer against the target kernel."""

	model_config = ConfigDict(extra='forbid', validate_assignment=True)

	learning_rate: float = Field(default=0.5, gt=0)
	max_iters: int = Field(default=500, ge=0)
	tol: float = Field(default=1e-6, ge=0)  # relative cost decrease over `window` iterations
	window: int = Field(default=10, ge=1)
	lam: float = Field(default=1e-4, ge=0)
	init_scale: float = Field(default=1e-3, gt=0)
	sigma: float = Field(default=DEFAULT_SIGMA, gt=0)
	seed: int = 0
	step_halving: bool = False
	log_every: int = Field(default=50, ge=1)


@dataclass
class TrainTrace:
	costs: list[float] = field(default_factory=list)
	converged: bool = False

	@property
	def iters_run(self) -> int:
		return max(len(self.costs) - 1, 0)

	@property
	def initial_cost(self) -> float:
		return self.costs[0]

	@property
	def final_cost(self) -> float:
		return self.costs[-1]
