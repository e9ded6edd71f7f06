from kernel_align.kpca_probe.service import (
	default_d_grid,
	eigen_share,
	eigendecompose,
	error_curve,
	fit_softmax,
	predict,
	project_test,
	write_curves_csv,
	write_spectrum_csv,
)
from kernel_align.kpca_probe.views import EigenBasis, ErrorCurve, ProbeConfig, Projection, SoftmaxModel

__all__ = [
	'EigenBasis',
	'ErrorCurve',
	'ProbeConfig',
	'Projection',
	'SoftmaxModel',
	'default_d_grid',
	'eigen_share',
	'eigendecompose',
	'error_curve',
	'fit_softmax',
	'predict',
	'project_test',
	'write_curves_csv',
	'write_spectrum_csv',
]
