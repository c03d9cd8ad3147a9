"""Parsers for study and summary CSV data."""

import csv
import io
import logging
from typing import Any

from ..core.pair_counts import PairCounts
from ..core.study import Study
from ..errors import StudyParseError
from .base_parser import SUMMARY_HEADER, BaseParser

logger = logging.getLogger(__name__)


class StudyCSVParser(BaseParser):
	"""Parser for matched case-referent CSV data.

	Accepts the long layout ``set_id,unit_id,exposed,case,subtype`` and the
	summary layout ``subtype,a,b,c,d``; the header decides which.
	"""

	def __init__(
		self,
		delimiter: str = ',',
		quotechar: str = '"',
		encoding: str | None = None,
		subtype_labels: list[str] | None = None,
	):
		"""Initialize parser.

		Args:
			delimiter: Field delimiter
			quotechar: Quote character
			encoding: Encoding (if None, auto-detected)
			subtype_labels: Declared subtype labels (if None, taken from the data)
		"""
		super().__init__(subtype_labels)
		self.delimiter = delimiter
		self.quotechar = quotechar
		self.encoding = encoding

	def parse(self, data: bytes) -> Study:
		"""Parses CSV data and returns Study.

		Args:
			data: CSV data bytes

		Returns:
			Study object
		"""
		return self._rows_to_study(self._read_rows(data))

	def parse_summary(self, data: bytes) -> dict[str | None, PairCounts]:
		"""Parses summary CSV data and returns the 2 x 2 tables.

		Args:
			data: CSV data bytes

		Returns:
			Dictionary {subtype label: PairCounts}
		"""
		return self._rows_to_summary(self._read_rows(data))

	def parse_from_string(self, csv_string: str) -> Study:
		"""Parses CSV data from string.

		Args:
			csv_string: CSV string

		Returns:
			Study object
		"""
		return self.parse(csv_string.encode('utf-8'))

	def detect_delimiter(self, data: bytes) -> str:
		"""Automatically detects delimiter in CSV data.

		Args:
			data: CSV data bytes

		Returns:
			Found delimiter
		"""
		text_data = self._decode(data)

		# Read first few lines for analysis
		lines = text_data.split('\n')[:5]

		delimiter_counts = {}
		for delimiter in [',', ';', '\t', '|']:
			delimiter_counts[delimiter] = sum(
				line.count(delimiter) for line in lines if line.strip()
			)

		return max(delimiter_counts, key=lambda x: delimiter_counts[x])

	def _decode(self, data: bytes) -> str:
		"""Decodes bytes, trying fallback encodings on failure."""
		encoding = self.encoding or self._detect_encoding(data)

		try:
			return data.decode(encoding)
		except (UnicodeDecodeError, LookupError):
			for fallback_encoding in ['utf-8', 'cp1251', 'latin-1']:
				try:
					text_data = data.decode(fallback_encoding)
					logger.warning(f'Decoded with fallback encoding {fallback_encoding}')
					return text_data
				except UnicodeDecodeError:
					continue
			raise StudyParseError(
				'Failed to decode data with any supported encoding'
			) from None

	def _read_rows(self, data: bytes) -> list[list[Any]]:
		"""Decodes and splits CSV data into cleaned rows."""
		text_data = self._decode(data).lstrip('\ufeff')
		csv_reader = csv.reader(
			io.StringIO(text_data), delimiter=self.delimiter, quotechar=self.quotechar
		)

		try:
			rows = list(csv_reader)
		except csv.Error as e:
			logger.error(f'Malformed CSV at line {csv_reader.line_num}: {e}')
			raise StudyParseError(str(e), line=csv_reader.line_num) from e

		return [[self._clean_cell_value(cell) for cell in row] for row in rows]


class SummaryCSVParser(StudyCSVParser):
	"""Parser for summary CSV data (one 2 x 2 table per subtype)."""

	def parse(self, data: bytes) -> Study:
		"""Parses summary CSV data and returns the reconstructed 1:1 Study.

		Args:
			data: CSV data bytes

		Returns:
			Study object with one synthetic pair per counted pair

		Raises:
			StudyParseError: If the header is not the summary header
		"""
		rows = self._read_rows(data)
		if self._header(rows) != SUMMARY_HEADER:
			raise StudyParseError(f'expected header {",".join(SUMMARY_HEADER)}', line=1)
		return self._rows_to_study(rows)
