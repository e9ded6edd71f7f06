from dataclasses import dataclass

import numpy as np

from kernel_align.exceptions import ConfigError
from kernel_align.layer_trainer.views import LayerParams

STACK_MAGIC = b'KSTK'
STACK_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LayerStack:
	"""
	Greedily trained layers in order. Layer i consumes the (normalized) output of layer i-1;
	layer 0 consumes the raw input of width input_dim. An empty stack with input_dim 0
	accepts any input width.
	"""

	layers: tuple[LayerParams, ...] = ()
	input_dim: int = 0

	def __post_init__(self):
		layers = tuple(self.layers)
		object.__setattr__(self, 'layers', layers)
		expected = self.input_dim
		for index, layer in enumerate(layers, start=1):
			if layer.W.shape[0] != expected + 1:
				raise ConfigError(f'layer {index} has {layer.W.shape[0]} weight rows, expected {expected + 1}')
			expected = layer.p

	@property
	def depth(self) -> int:
		return len(self.layers)

	@property
	def output_dim(self) -> int:
		return self.layers[-1].p if self.layers else self.input_dim

	def same_as(self, other: 'LayerStack') -> bool:
		"""Bitwise equality of every weight and bandwidth."""
		if self.input_dim != other.input_dim or self.depth != other.depth:
			return False
		return all(
			a.sigma == b.sigma and a.W.shape == b.W.shape and a.W.tobytes() == b.W.tobytes()
			for a, b in zip(self.layers, other.layers)
		)

	@classmethod
	def from_layers(cls, layers: list[LayerParams]) -> 'LayerStack':
		return cls(layers=tuple(layers), input_dim=layers[0].input_dim if layers else 0)


def weights_without_bias(layer: LayerParams) -> np.ndarray:
	"""p×d view of the filters: one row per unit, bias weight dropped."""
	return layer.W[:-1, :].T
