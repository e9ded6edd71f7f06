from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from kernel_align.heads_baseline.views import HEAD_WIDTH, HeadConfig
from kernel_align.kernel.views import DEFAULT_SIGMA
from kernel_align.kpca_probe.views import ProbeConfig
from kernel_align.layer_trainer.views import TrainConfig

DatasetName = Literal['mnist', 'cifar10']


class ExperimentConfig(BaseModel):
	"""Everything one experiment run needs; read from a flat key=value file."""

	model_config = ConfigDict(extra='forbid', validate_assignment=True)

	# data
	dataset: DatasetName = 'mnist'
	data_dir: str | None = None
	train_files: list[str] | None = None
	test_files: list[str] | None = None
	train_size: int = Field(default=1000, gt=0)
	test_size: int | None = Field(default=None, gt=0)  # None evaluates on the full test split
	train_sizes: list[int] = Field(default_factory=lambda: [200, 500, 1000])

	# layer-wise training
	layer_widths: list[int] = Field(default_factory=lambda: [64, 64])
	sigma: float = Field(default=DEFAULT_SIGMA, gt=0)
	learning_rate: float = Field(default=0.5, gt=0)
	max_iters: int = Field(default=500, ge=0)
	tol: float = Field(default=1e-6, ge=0)
	window: int = Field(default=10, ge=1)
	lam: float = Field(default=1e-4, ge=0)
	init_scale: float = Field(default=1e-3, gt=0)
	step_halving: bool = False

	# FC head and backprop baseline
	head_hidden: int = Field(default=HEAD_WIDTH, gt=0)
	head_learning_rate: float = Field(default=0.5, gt=0)
	head_max_iters: int = Field(default=1000, ge=0)

	# kPCA probe
	d_grid: list[int] | None = None
	probe_reg: float = Field(default=1e-6, ge=0)
	probe_max_iters: int = Field(default=500, ge=1)

	workers: int = Field(default=1, ge=1)
	out_dir: str = 'runs'
	seed: int = 0

	@field_validator('train_files', 'test_files', 'train_sizes', 'layer_widths', 'd_grid', mode='before')
	@classmethod
	def split_list(cls, value):
		if isinstance(value, str):
			items = [item.strip() for item in value.split(',') if item.strip()]
			return items or None
		return value

	@model_validator(mode='after')
	def check_counts(self):
		for name in ('train_sizes', 'layer_widths', 'd_grid'):
			values = getattr(self, name)
			if values is not None and any(v <= 0 for v in values):
				raise ValueError(f'{name} entries must be positive')
		if not self.layer_widths:
			raise ValueError('layer_widths must name at least one layer')
		if not self.train_sizes:
			raise ValueError('train_sizes must name at least one size')
		return self

	def train_config(self) -> TrainConfig:
		return TrainConfig(
			learning_rate=self.learning_rate,
			max_iters=self.max_iters,
			tol=self.tol,
			window=self.window,
			lam=self.lam,
			init_scale=self.init_scale,
			sigma=self.sigma,
			seed=self.seed,
			step_halving=self.step_halving,
		)

	def head_config(self) -> HeadConfig:
		return HeadConfig(
			learning_rate=self.head_learning_rate,
			max_iters=self.head_max_iters,
			tol=self.tol,
			window=self.window,
			lam=self.lam,
			hidden=self.head_hidden,
			seed=self.seed,
		)

	def probe_config(self) -> ProbeConfig:
		return ProbeConfig(sigma=self.sigma, reg=self.probe_reg, max_iters=self.probe_max_iters, workers=self.workers)


@dataclass(frozen=True)
class CompareRow:
	train_size: int
	variant: Literal['layerwise', 'dnn']
	layers: int
	test_acc: float
