"""Utilities for working with data values."""

import logging
import math
from typing import Any

logger = logging.getLogger(__name__)


class DataUtils:
	"""Utilities for coercing and formatting input and output values."""

	@staticmethod
	def clean_value(value: Any) -> Any:
		"""Cleans value from extra characters.

		Args:
		    value: Original value

		Returns:
		    Cleaned value (None for empty strings)
		"""
		if value is None:
			return None

		if isinstance(value, str):
			cleaned = value.strip().replace('\r\n', '\n').replace('\r', '\n')
			return cleaned if cleaned else None

		return value

	@staticmethod
	def convert_to_number(value: Any) -> int | float | None:
		"""Attempts to convert value to number.

		Args:
		    value: Value to convert

		Returns:
		    Number or None if conversion failed
		"""
		if value is None or isinstance(value, bool):
			return None

		if isinstance(value, (int, float)):
			return value

		if isinstance(value, str):
			cleaned = value.strip()
			if not cleaned:
				return None

			try:
				return int(cleaned)
			except ValueError:
				pass

			try:
				return float(cleaned)
			except ValueError:
				pass

		return None

	@staticmethod
	def convert_to_count(value: Any) -> int | None:
		"""Attempts to convert value to a nonnegative integer count.

		Args:
		    value: Value to convert

		Returns:
		    Integer or None if value is not a whole nonnegative number
		"""
		number = DataUtils.convert_to_number(value)
		if number is None or not math.isfinite(number) or number < 0:
			return None
		if number != int(number):
			return None
		return int(number)

	@staticmethod
	def convert_to_binary(value: Any) -> int | None:
		"""Attempts to convert value to a 0/1 indicator.

		Args:
		    value: Value to convert

		Returns:
		    0, 1 or None if conversion failed
		"""
		if isinstance(value, bool):
			return int(value)

		count = DataUtils.convert_to_count(value)
		if count in (0, 1):
			return count

		if isinstance(value, str):
			cleaned = value.strip().lower()
			if cleaned in ('true', 'yes'):
				return 1
			if cleaned in ('false', 'no'):
				return 0

		return None

	@staticmethod
	def is_empty_row(row: list[Any]) -> bool:
		"""Checks if every cell of a row is empty."""
		return not row or all(cell is None or str(cell).strip() == '' for cell in row)

	@staticmethod
	def parse_float_list(text: str) -> list[float]:
		"""Parses a comma-separated list of numbers.

		Args:
		    text: Text such as "1.0,1.2, 1.4"

		Returns:
		    List of floats

		Raises:
		    ValueError: If an item is not a number
		"""
		values = []
		for item in DataUtils.parse_str_list(text):
			number = DataUtils.convert_to_number(item)
			if number is None:
				raise ValueError(f'not a number: {item!r}')
			values.append(float(number))
		return values

	@staticmethod
	def parse_str_list(text: str) -> list[str]:
		"""Parses a comma-separated list of non-empty items."""
		return [item.strip() for item in text.split(',') if item.strip()]

	@staticmethod
	def format_number(value: float, digits: int = 6) -> str:
		"""Formats a number with a fixed count of significant digits."""
		return f'{value:.{digits}g}'

	@staticmethod
	def format_percent(fraction: float) -> str:
		"""Formats a fraction as a percentage with two decimals."""
		return f'{100 * fraction:.2f}%'
