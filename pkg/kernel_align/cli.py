import logging
import sys
from collections.abc import Callable
from functools import wraps
from typing import Any

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from kernel_align.exceptions import KernelAlignError
from kernel_align.experiment.io import load_config
from kernel_align.experiment.service import cmd_compare, cmd_export_filters, cmd_kpca, cmd_train_stack
from kernel_align.experiment.views import ExperimentConfig

load_dotenv()

logger = logging.getLogger('kernel_align.cli')


def _config_options(func: Callable) -> Callable:
	func = click.option('--seed', type=int, default=None, help='Seed for subsampling and initialization (overrides the config file)')(func)
	func = click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None, help='Output directory (overrides the config file)')(func)
	func = click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None, help='key=value experiment config file')(func)
	return func


def _load(config_path: str | None, out_dir: str | None, seed: int | None) -> ExperimentConfig:
	return load_config(config_path, {'out_dir': out_dir, 'seed': seed})


def _exit_on_error(func: Callable[..., Any]) -> Callable[..., Any]:
	"""Map domain errors onto exit codes: 1 config, 2 data, 3 numeric divergence."""

	@wraps(func)
	def wrapper(*args, **kwargs):
		try:
			return func(*args, **kwargs)
		except KernelAlignError as e:
			logger.debug('Command failed', exc_info=True)
			click.echo(f'Error: {e}', err=True)
			sys.exit(e.exit_code)
		except ValidationError as e:
			click.echo(f'Error: invalid configuration: {e}', err=True)
			sys.exit(1)

	return wrapper


@click.group()
@click.option('--debug', is_flag=True, help='Enable debug logging')
def main(debug: bool = False):
	"""Layer-wise kernel-target alignment training and analysis."""
	if debug:
		logging.getLogger('kernel_align').setLevel(logging.DEBUG)
		logging.getLogger().setLevel(logging.DEBUG)


@main.command('train-stack')
@_config_options
@_exit_on_error
def train_stack_command(config_path: str | None, out_dir: str | None, seed: int | None):
	"""Greedily train the configured layers and save the weight file."""
	cfg = _load(config_path, out_dir, seed)
	path = cmd_train_stack(cfg)
	click.echo(str(path))


@main.command('kpca')
@_config_options
@click.option('--weights', 'weights_path', type=click.Path(dir_okay=False), required=True, help='Weight file written by train-stack')
@_exit_on_error
def kpca_command(config_path: str | None, out_dir: str | None, seed: int | None, weights_path: str):
	"""Kernel-PCA error curves for every layer of a trained stack."""
	cfg = _load(config_path, out_dir, seed)
	cmd_kpca(cfg, weights_path)


@main.command('compare')
@_config_options
@_exit_on_error
def compare_command(config_path: str | None, out_dir: str | None, seed: int | None):
	"""Layer-wise training against the same architecture trained by backprop."""
	cfg = _load(config_path, out_dir, seed)
	cmd_compare(cfg)


@main.command('export-filters')
@_config_options
@click.option('--weights', 'weights_path', type=click.Path(dir_okay=False), required=True, help='Weight file written by train-stack')
@click.option('--layer', type=int, default=1, show_default=True, help='Layer whose filters to export (1-based)')
@_exit_on_error
def export_filters_command(config_path: str | None, out_dir: str | None, seed: int | None, weights_path: str, layer: int):
	"""Export a layer's raw weights, one CSV row per unit."""
	cfg = _load(config_path, out_dir, seed)
	click.echo(str(cmd_export_filters(cfg, weights_path, layer)))


if __name__ == '__main__':
	main()
