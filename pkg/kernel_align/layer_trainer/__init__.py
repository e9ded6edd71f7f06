from kernel_align.layer_trainer.service import cost_and_gradient, forward, train_layer, write_trace_csv
from kernel_align.layer_trainer.views import LayerParams, TrainConfig, TrainTrace

__all__ = ['LayerParams', 'TrainConfig', 'TrainTrace', 'cost_and_gradient', 'forward', 'train_layer', 'write_trace_csv']
