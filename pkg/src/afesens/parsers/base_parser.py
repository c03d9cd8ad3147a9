"""Base class for parsers."""

import logging
from abc import ABC, abstractmethod
from typing import Any

from ..core.matched_set import MatchedSet
from ..core.pair_counts import PairCounts
from ..core.study import DEFAULT_LABEL, STUDY_HEADER, Study
from ..errors import StudyParseError, StudyValidationError
from ..utils.data_utils import DataUtils

logger = logging.getLogger(__name__)

SUMMARY_HEADER = ('subtype', 'a', 'b', 'c', 'd')


class BaseParser(ABC):
	"""Base class for all parsers.

	Turns rows of cells (header first) into a validated Study. Two layouts
	are recognized from the header: the long study layout (one row per unit)
	and the summary layout (one 2 x 2 table per subtype).
	"""

	def __init__(self, subtype_labels: list[str] | None = None):
		"""Initialize parser.

		Args:
			subtype_labels: Declared subtype labels; None derives them from the data
		"""
		self.subtype_labels = tuple(subtype_labels) if subtype_labels else None

	@abstractmethod
	def parse(self, data: bytes) -> Study:
		"""Parses data and returns Study.

		Args:
			data: Data bytes to parse

		Returns:
			Study object
		"""
		pass

	@abstractmethod
	def parse_summary(self, data: bytes) -> dict[str | None, PairCounts]:
		"""Parses summary-layout data and returns the 2 x 2 tables.

		Args:
			data: Data bytes to parse

		Returns:
			Dictionary {subtype label: PairCounts}
		"""
		pass

	def _clean_cell_value(self, value: Any) -> Any:
		"""Cleans cell value from extra characters.

		Args:
			value: Original value

		Returns:
			Cleaned value
		"""
		return DataUtils.clean_value(value)

	def _detect_encoding(self, data: bytes) -> str:
		"""Detects data encoding.

		Args:
			data: Data bytes

		Returns:
			Encoding name
		"""
		import chardet

		result = chardet.detect(data)
		encoding = result.get('encoding') or 'utf-8'
		confidence = result.get('confidence', 0)

		# Low confidence on short numeric files is common; trust utf-8 then
		if confidence < 0.7 or encoding.lower() == 'ascii':
			encoding = 'utf-8'

		return encoding

	def _header(self, rows: list[list[Any]]) -> tuple[str, ...]:
		"""Normalized header row."""
		if not rows:
			raise StudyParseError('input is empty; a header row is required', line=1)
		return tuple(str(cell).strip().lower() for cell in rows[0] if cell is not None)

	def _rows_to_study(self, rows: list[list[Any]]) -> Study:
		"""Builds a Study from rows in either layout.

		Args:
			rows: Rows of cleaned cell values, header first

		Returns:
			Study object
		"""
		header = self._header(rows)
		if header == SUMMARY_HEADER:
			tables = self._rows_to_summary(rows)
			if self.subtype_labels:
				unknown = [lbl for lbl in tables if lbl not in self.subtype_labels]
				if unknown:
					raise StudyValidationError(f'unknown subtype label {unknown[0]!r}')
			return Study.from_pair_counts(tables)
		if header[:4] != STUDY_HEADER[:4] or header[4:] not in ((), STUDY_HEADER[4:]):
			logger.error(f'Unrecognized header: {header}')
			raise StudyParseError(
				f'expected header {",".join(STUDY_HEADER)} or {",".join(SUMMARY_HEADER)}',
				line=1,
			)

		units: dict[str, list[tuple[str, int, int, int]]] = {}
		labels: dict[str, str] = {}
		for line, row in enumerate(rows[1:], start=2):
			if DataUtils.is_empty_row(row):
				continue
			cells = list(row) + [None] * (5 - len(row))
			set_id, unit_id, exposed, case, subtype = cells[:5]
			if set_id is None or unit_id is None:
				raise StudyParseError('set_id and unit_id are required', line=line)
			z = DataUtils.convert_to_binary(exposed)
			r = DataUtils.convert_to_binary(case)
			if z is None or r is None:
				raise StudyParseError(
					f'exposed and case must be 0 or 1, got {exposed!r}, {case!r}',
					line=line,
				)

			key = str(set_id)
			members = units.setdefault(key, [])
			if any(str(unit_id) == member[0] for member in members):
				raise StudyParseError(
					f'duplicate unit_id {unit_id!r} in set {key}', line=line
				)
			members.append((str(unit_id), z, r, line))
			if r == 1 and subtype is not None:
				labels[key] = str(subtype)

		declared = self.subtype_labels or tuple(dict.fromkeys(labels.values()))
		sets = []
		for set_id, members in units.items():
			sets.append(
				MatchedSet(
					set_id=set_id,
					z=tuple(m[1] for m in members),
					r=tuple(m[2] for m in members),
					subtype=labels.get(set_id),
				)
			)

		study = Study(sets=tuple(sets), subtype_labels=declared or (DEFAULT_LABEL,))
		logger.info(
			f'Parsed {study.n_sets} matched sets ({study.n_units} units, '
			f'{study.exposed_cases} exposed cases)'
		)
		return study

	def _rows_to_summary(self, rows: list[list[Any]]) -> dict[str | None, PairCounts]:
		"""Builds 2 x 2 tables from summary-layout rows.

		Args:
			rows: Rows of cleaned cell values, header first

		Returns:
			Dictionary {subtype label: PairCounts}
		"""
		if self._header(rows) != SUMMARY_HEADER:
			raise StudyParseError(f'expected header {",".join(SUMMARY_HEADER)}', line=1)

		tables: dict[str | None, PairCounts] = {}
		for line, row in enumerate(rows[1:], start=2):
			if DataUtils.is_empty_row(row):
				continue
			cells = list(row) + [None] * (5 - len(row))
			label = str(cells[0]) if cells[0] is not None else None
			counts = [DataUtils.convert_to_count(cell) for cell in cells[1:5]]
			if any(count is None for count in counts):
				raise StudyParseError(
					f'counts must be nonnegative integers, got {cells[1:5]}', line=line
				)
			if label in tables:
				raise StudyParseError(f'duplicate subtype {label!r}', line=line)
			tables[label] = PairCounts(*counts)

		if None in tables and len(tables) > 1:
			raise StudyValidationError('an unlabeled summary row must be the only row')
		if not tables:
			raise StudyParseError('summary has no rows', line=2)
		return tables
