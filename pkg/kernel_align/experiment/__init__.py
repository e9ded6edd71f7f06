from kernel_align.experiment.io import load_config, parse_config_text
from kernel_align.experiment.service import cmd_compare, cmd_export_filters, cmd_kpca, cmd_train_stack
from kernel_align.experiment.views import CompareRow, ExperimentConfig

__all__ = [
	'CompareRow',
	'ExperimentConfig',
	'cmd_compare',
	'cmd_export_filters',
	'cmd_kpca',
	'cmd_train_stack',
	'load_config',
	'parse_config_text',
]
