from kernel_align.logging_config import setup_logging

setup_logging()

from kernel_align.datasets.views import LabeledDataset as LabeledDataset
from kernel_align.heads_baseline.views import HeadConfig as HeadConfig
from kernel_align.heads_baseline.views import MlpModel as MlpModel
from kernel_align.kpca_probe.views import ErrorCurve as ErrorCurve
from kernel_align.kpca_probe.views import ProbeConfig as ProbeConfig
from kernel_align.layer_trainer.views import LayerParams as LayerParams
from kernel_align.layer_trainer.views import TrainConfig as TrainConfig
from kernel_align.network.views import LayerStack as LayerStack
from kernel_align.preprocess.views import FeatureMatrix as FeatureMatrix

__all__ = [
	'ErrorCurve',
	'FeatureMatrix',
	'HeadConfig',
	'LabeledDataset',
	'LayerParams',
	'LayerStack',
	'MlpModel',
	'ProbeConfig',
	'TrainConfig',
]
