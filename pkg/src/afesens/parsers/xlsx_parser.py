"""Parser for XLSX data."""

import io
import logging
from typing import Any

from openpyxl import load_workbook

from ..core.pair_counts import PairCounts
from ..core.study import Study
from ..errors import StudyParseError
from .base_parser import BaseParser

logger = logging.getLogger(__name__)


class XLSXParser(BaseParser):
	"""Parser for study or summary data stored in an XLSX workbook."""

	def __init__(
		self,
		worksheet_name: str | None = None,
		subtype_labels: list[str] | None = None,
	):
		"""Initialize parser.

		Args:
		    worksheet_name: Worksheet to read (if None, the active one)
		    subtype_labels: Declared subtype labels (if None, taken from the data)
		"""
		super().__init__(subtype_labels)
		self.worksheet_name = worksheet_name

	def parse(self, data: bytes) -> Study:
		"""Parses XLSX data and returns Study.

		Args:
		    data: XLSX data bytes

		Returns:
		    Study object
		"""
		return self._rows_to_study(self._read_rows(data))

	def parse_summary(self, data: bytes) -> dict[str | None, PairCounts]:
		"""Parses summary-layout XLSX data and returns the 2 x 2 tables.

		Args:
		    data: XLSX data bytes

		Returns:
		    Dictionary {subtype label: PairCounts}
		"""
		return self._rows_to_summary(self._read_rows(data))

	def _read_rows(self, data: bytes) -> list[list[Any]]:
		"""Loads the worksheet and returns its cleaned rows."""
		try:
			workbook = load_workbook(io.BytesIO(data), data_only=True, read_only=True)
		except Exception as e:
			logger.error(f'Error parsing XLSX data: {e}')
			raise StudyParseError(f'Failed to parse XLSX data: {e}') from e

		try:
			if self.worksheet_name and self.worksheet_name in workbook.sheetnames:
				worksheet = workbook[self.worksheet_name]
			else:
				if self.worksheet_name:
					logger.warning(
						f'Worksheet {self.worksheet_name!r} not found, using the active one'
					)
				worksheet = workbook.active

			rows = [
				[self._clean_cell_value(cell) for cell in row]
				for row in worksheet.iter_rows(values_only=True)
			]
		finally:
			workbook.close()

		logger.debug(f'Read {len(rows)} rows from worksheet {worksheet.title!r}')
		return rows
