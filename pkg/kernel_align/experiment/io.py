import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from kernel_align.exceptions import ConfigError
from kernel_align.experiment.views import ExperimentConfig

logger = logging.getLogger(__name__)


def parse_config_text(text: str, source: str = '<config>') -> dict[str, str]:
	"""Parse flat `key=value` lines; blank lines and lines starting with # are skipped."""
	values: dict[str, str] = {}
	for number, raw_line in enumerate(text.splitlines(), start=1):
		line = raw_line.strip()
		if not line or line.startswith('#'):
			continue
		if '=' not in line:
			raise ConfigError(f'{source}:{number}: expected key=value, got {raw_line!r}')
		key, value = (part.strip() for part in line.split('=', 1))
		if not key:
			raise ConfigError(f'{source}:{number}: empty key')
		if key in values:
			raise ConfigError(f'{source}:{number}: duplicate key {key!r}')
		values[key] = value
	return values


def build_config(values: dict[str, Any], source: str = '<config>') -> ExperimentConfig:
	unknown = sorted(set(values) - set(ExperimentConfig.model_fields))
	if unknown:
		raise ConfigError(f'{source}: unknown key(s) {", ".join(unknown)}')
	cleaned = {key: (None if value == '' else value) for key, value in values.items()}
	try:
		return ExperimentConfig.model_validate(cleaned)
	except ValidationError as e:
		raise ConfigError(f'{source}: {e}') from e


def load_config(path: str | Path | None, overrides: dict[str, Any] | None = None) -> ExperimentConfig:
	"""Read a key=value file (or start from defaults) and apply CLI overrides on top."""
	values: dict[str, Any] = {}
	source = '<defaults>'
	if path is not None:
		source = str(path)
		try:
			text = Path(path).read_text(encoding='utf-8')
		except (OSError, UnicodeDecodeError) as e:
			raise ConfigError(f'Cannot read config file {path}: {e}') from e
		values = parse_config_text(text, source)
	for key, value in (overrides or {}).items():
		if value is not None:
			values[key] = value
	config = build_config(values, source)
	logger.debug(f'Loaded experiment config from {source}: {config.model_dump(exclude_defaults=True)}')
	return config
