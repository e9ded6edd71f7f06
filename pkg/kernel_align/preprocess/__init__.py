from kernel_align.preprocess.service import append_bias, normalize_rows
from kernel_align.preprocess.views import FeatureMatrix

__all__ = ['FeatureMatrix', 'append_bias', 'normalize_rows']
