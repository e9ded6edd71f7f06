from kernel_align.heads_baseline.service import (
	baseline_dims,
	cost_and_gradients,
	evaluate,
	init_mlp,
	predict_classes,
	train_baseline_dnn,
	train_head,
	write_report_csv,
)
from kernel_align.heads_baseline.views import FitReport, HeadConfig, MlpModel

__all__ = [
	'FitReport',
	'HeadConfig',
	'MlpModel',
	'baseline_dims',
	'cost_and_gradients',
	'evaluate',
	'init_mlp',
	'predict_classes',
	'train_baseline_dnn',
	'train_head',
	'write_report_csv',
]
