from kernel_align.network.service import export_filters, load_stack, save_stack, train_stack, transform
from kernel_align.network.views import LayerStack

__all__ = ['LayerStack', 'export_filters', 'load_stack', 'save_stack', 'train_stack', 'transform']
