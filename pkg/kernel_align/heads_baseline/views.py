from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kernel_align.exceptions import ArgumentError

HEAD_WIDTH = 100


@dataclass(frozen=True)
class MlpModel:
	"""
	tanh hidden layers and a softmax output. weights[i] is (layer_dims[i] + 1) × layer_dims[i + 1];
	its last row is the bias.
	"""

	layer_dims: tuple[int, ...]
	weights: tuple[np.ndarray, ...]

	def __post_init__(self):
		dims = tuple(int(d) for d in self.layer_dims)
		weights = tuple(np.asarray(w, dtype=np.float64) for w in self.weights)
		if len(dims) < 2 or len(weights) != len(dims) - 1:
			raise ArgumentError(f'{len(dims)} layer widths need {max(len(dims) - 1, 0)} weight matrices, got {len(weights)}')
		for index, (w, fan_in, fan_out) in enumerate(zip(weights, dims[:-1], dims[1:])):
			if w.shape != (fan_in + 1, fan_out):
				raise ArgumentError(f'weight {index} has shape {w.shape}, expected {(fan_in + 1, fan_out)}')
			if not np.all(np.isfinite(w)):
				raise ArgumentError(f'weight {index} contains non-finite entries')
		object.__setattr__(self, 'layer_dims', dims)
		object.__setattr__(self, 'weights', weights)

	@property
	def input_dim(self) -> int:
		return self.layer_dims[0]

	@property
	def n_classes(self) -> int:
		return self.layer_dims[-1]


@dataclass
class FitReport:
	train_loss: float
	train_acc: float
	test_acc: float
	epochs: int
	losses: list[float] = field(default_factory=list)


class HeadConfig(BaseModel):
	"""Full-batch gradient descent settings shared by the frozen-feature head and the backprop baseline."""

	model_config = ConfigDict(extra='forbid', validate_assignment=True)

	learning_rate: float = Field(default=0.5, gt=0)
	max_iters: int = Field(default=1000, ge=0)
	tol: float = Field(default=1e-6, ge=0)
	window: int = Field(default=10, ge=1)
	lam: float = Field(default=1e-4, ge=0)
	hidden: int = Field(default=HEAD_WIDTH, ge=1)
	seed: int = 0
	log_every: int = Field(default=100, ge=1)
