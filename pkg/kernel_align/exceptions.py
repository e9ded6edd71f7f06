from collections.abc import Sequence


class KernelAlignError(Exception):
	"""Base error; `exit_code` is what the CLI returns when this escapes a command."""

	exit_code = 1

	def __init__(self, message: str):
		self.message = message
		super().__init__(message)


class ConfigError(KernelAlignError):
	exit_code = 1


class ArgumentError(KernelAlignError, ValueError):
	exit_code = 1


class PreconditionError(ArgumentError):
	pass


class DataFormatError(KernelAlignError):
	exit_code = 2


class DataConsistencyError(DataFormatError):
	pass


class DataIOError(KernelAlignError, OSError):
	exit_code = 2

	def __init__(self, message: str, offset: int | None = None):
		self.offset = offset
		if offset is not None:
			message = f'{message} (at byte offset {offset})'
		super().__init__(message)


class NumericalError(KernelAlignError, ArithmeticError):
	exit_code = 3

	def __init__(self, stage: str, message: str | None = None, trace: Sequence[float] | None = None):
		self.stage = stage
		self.trace = list(trace) if trace is not None else None
		super().__init__(f'Non-finite values at stage {stage!r}' + (f': {message}' if message else ''))


class DegenerateProblemError(ArgumentError):
	pass
