"""Exceptions raised by the library."""


class AFeSensError(ValueError):
	"""Base class for all library errors."""


class StudyValidationError(AFeSensError):
	"""Matched case-referent data violates a study invariant."""


class StudyParseError(StudyValidationError):
	"""A row of study or summary input could not be parsed.

	Attributes:
		line: 1-based line number of the offending row (header is line 1)
	"""

	def __init__(self, message: str, line: int | None = None):
		self.line = line
		if line is not None:
			message = f'line {line}: {message}'
		super().__init__(message)


class DomainError(AFeSensError):
	"""A numeric argument lies outside its mathematical domain."""


class UndefinedEstimateError(DomainError):
	"""An estimate is undefined for the supplied counts."""


class BracketError(DomainError):
	"""A bisection interval does not bracket the crossing it searches for."""


class ConfigError(AFeSensError):
	"""A simulation or design-sensitivity configuration is invalid."""
